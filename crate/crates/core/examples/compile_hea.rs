//! Compile a random 3-qubit HEA target with each cost and print the training
//! outcome. Pass a seed as the first argument to try another instance.
use qwc::optimize::StopReason;
use qwc::{compile, make_problem, CostKind, EnsembleSpec, Entanglement, TrainingConfig};

fn main() -> qwc::Result<()> {
    let seed: u64 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(1);
    let n = 3;
    let problem = make_problem(
        n,
        Entanglement::Full,
        2,
        EnsembleSpec::fixed(n, 8, seed + 100),
        seed,
    )?;
    for kind in CostKind::ALL {
        let mut cfg = TrainingConfig::new(kind);
        cfg.early_stop.enabled = true;
        let rec = compile(&problem, &cfg)?;
        let stop = match rec.stop_reason {
            StopReason::MaxSteps => "max steps",
            StopReason::EarlyStop => "plateau",
        };
        println!(
            "{kind}: {} after {} steps ({stop}), cost {:.2e}, 1-F_avg {:.2e}",
            if rec.success { "success" } else { "failed" },
            rec.steps_run,
            rec.final_cost,
            rec.infidelity
        );
    }
    Ok(())
}
