//! Evaluate the Wasserstein, Hilbert-Schmidt and Loschmidt-echo costs and
//! their parameter-shift gradients on one random compilation problem.
use qwc::costs::{evaluate, infidelity};
use qwc::gradients::cost_gradient;
use qwc::{make_problem, CostKind, EnsembleSpec, Entanglement};

fn main() -> qwc::Result<()> {
    let n = 4;
    let problem = make_problem(n, Entanglement::Full, 2, EnsembleSpec::fixed(n, 8, 11), 3)?;
    let params = problem.initial_params();
    println!(
        "{} parameters, {} observables",
        params.len(),
        problem.observables().len()
    );
    println!("1 - F_avg at init: {:.4}", infidelity(&problem, params)?);
    for kind in CostKind::ALL {
        let cost = evaluate(&problem, kind, params)?;
        let g = cost_gradient(&problem, params, kind)?;
        println!(
            "{kind}: cost {cost:.4}  |grad|_1 {:.4}  |grad|_2 {:.4}",
            g.l1_norm, g.l2_norm
        );
    }
    // every cost vanishes at the target parameters
    for kind in CostKind::ALL {
        println!(
            "{kind} at target: {:.2e}",
            evaluate(&problem, kind, problem.target_params())?
        );
    }
    Ok(())
}
