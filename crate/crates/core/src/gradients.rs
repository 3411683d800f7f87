//! Parameter-shift gradients for all three costs.
//!
//! Every trainable gate is `exp(-i t G / 2)` with `G` in `{Y, Z}`, so for any
//! observable `O` the derivative of `<psi|U(t)^dagger O U(t)|psi>` with
//! respect to one gate angle is `[E(t + pi/2) - E(t - pi/2)] / 2`. A
//! parameter feeding several gates sums that rule over its occurrences.
//!
//! For the Wasserstein cost the optimal discriminator `H_W` is held fixed
//! while differentiating; the LP is solved once per state and step.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::costs::{mean_square, qwc_estimates, CompilationProblem, CostKind, TargetData};
use crate::error::{check_dim, QwcError, Result};
use crate::simulator::{
    fidelity_pure, GateKind, GateShift, ParamCircuit, StateVector, DEFAULT_MAX_QUBITS,
};
use crate::wasserstein::{W1Estimate, WassersteinHamiltonian};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GradientReport {
    pub grad: Vec<f64>,
    pub l1_norm: f64,
    pub l2_norm: f64,
}

impl GradientReport {
    pub fn new(grad: Vec<f64>) -> Self {
        let l1_norm = grad.iter().map(|g| g.abs()).sum();
        let l2_norm = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
        Self {
            grad,
            l1_norm,
            l2_norm,
        }
    }

    pub fn zeros(len: usize) -> Self {
        Self::new(vec![0.0; len])
    }
}

fn check_rotation(circuit: &ParamCircuit, index: usize) -> Result<Vec<usize>> {
    if index >= circuit.param_count() {
        return Err(QwcError::Parameter(format!(
            "parameter index {index} >= {}",
            circuit.param_count()
        )));
    }
    let gates: Vec<usize> = circuit.gates_for_param(index).collect();
    for &g in &gates {
        let kind = circuit.gates()[g].kind();
        if !matches!(kind, GateKind::Ry | GateKind::Rz) {
            return Err(QwcError::UnsupportedGenerator {
                index,
                kind: kind.name(),
            });
        }
    }
    Ok(gates)
}

/// Shift-rule derivative of `f(U(params)|input>)` with respect to
/// parameter `index`, where `f` is a quadratic form in the output state.
pub fn shift_rule<F>(
    circuit: &ParamCircuit,
    params: &[f64],
    input: &StateVector,
    index: usize,
    mut f: F,
) -> Result<f64>
where
    F: FnMut(&StateVector) -> Result<f64>,
{
    let gates = check_rotation(circuit, index)?;
    let mut total = 0.0;
    for gate in gates {
        let plus = circuit.apply_shifted(
            params,
            input,
            GateShift {
                gate,
                offset: FRAC_PI_2,
            },
        )?;
        let minus = circuit.apply_shifted(
            params,
            input,
            GateShift {
                gate,
                offset: -FRAC_PI_2,
            },
        )?;
        total += (f(&plus)? - f(&minus)?) / 2.0;
    }
    Ok(total)
}

/// `d/d params[index]  <input| U^dagger H U |input>`.
pub fn shift_rule_expectation_grad(
    circuit: &ParamCircuit,
    params: &[f64],
    input: &StateVector,
    observable: &WassersteinHamiltonian,
    index: usize,
) -> Result<f64> {
    check_dim(circuit.n(), observable.n())?;
    if observable.active_count() == 0 {
        check_rotation(circuit, index)?;
        return Ok(0.0);
    }
    shift_rule(circuit, params, input, index, |s| observable.expectation(s))
}

/// Cost, gradient, and (for the Wasserstein cost) the per-state estimates
/// at one parameter point.
#[derive(Debug, Clone)]
pub struct CostEvaluation {
    pub cost: f64,
    pub gradient: GradientReport,
    pub estimates: Option<Vec<W1Estimate>>,
}

/// Wasserstein cost and its gradient using precomputed target data.
pub fn qwc_value_and_gradient(
    problem: &CompilationProblem,
    target: &TargetData,
    params: &[f64],
) -> Result<CostEvaluation> {
    let estimates = qwc_estimates(problem, target, params)?;
    let gradient = qwc_gradient_from(problem, target, params, &estimates)?;
    Ok(CostEvaluation {
        cost: mean_square(&estimates),
        gradient,
        estimates: Some(estimates),
    })
}

/// Chain rule `(1/|A|) sum_a 2 W1_a dTr[rho_a H_W^a]/dtheta` given the
/// per-state estimates.
pub fn qwc_gradient_from(
    problem: &CompilationProblem,
    target: &TargetData,
    params: &[f64],
    estimates: &[W1Estimate],
) -> Result<GradientReport> {
    check_dim(target.states.len(), estimates.len())?;
    let ansatz = problem.ansatz();
    let scale = 2.0 / estimates.len() as f64;
    let mut grad = vec![0.0; ansatz.param_count()];
    for (psi, est) in target.states.iter().zip(estimates) {
        if est.value == 0.0 {
            continue;
        }
        for (i, g) in grad.iter_mut().enumerate() {
            let d = shift_rule_expectation_grad(ansatz, params, psi, &est.hamiltonian, i)?;
            *g += scale * est.value * d;
        }
    }
    Ok(GradientReport::new(grad))
}

pub fn qwc_gradient(problem: &CompilationProblem, params: &[f64]) -> Result<GradientReport> {
    let target = TargetData::new(problem, problem.ensemble().to_vec(), true)?;
    Ok(qwc_value_and_gradient(problem, &target, params)?.gradient)
}

/// Hilbert-Schmidt cost and gradient. `|Tr(V^dagger U)|^2` is the overlap
/// of the Choi states, so the shift rule applies to it directly.
pub fn hst_value_and_gradient(
    problem: &CompilationProblem,
    params: &[f64],
) -> Result<CostEvaluation> {
    let ansatz = problem.ansatz();
    let v = problem.target_unitary()?;
    let n = problem.n();
    let dim2 = (1usize << (2 * n)) as f64;
    let overlap = |shift: Option<GateShift>| -> Result<f64> {
        let u = ansatz.unitary_with(params, shift, DEFAULT_MAX_QUBITS)?;
        Ok(v.trace_adjoint_product(&u)?.norm_sqr() / dim2)
    };
    let cost = (1.0 - overlap(None)?).clamp(0.0, 1.0);
    let mut grad = vec![0.0; ansatz.param_count()];
    for (i, g) in grad.iter_mut().enumerate() {
        for gate in check_rotation(ansatz, i)? {
            let plus = overlap(Some(GateShift {
                gate,
                offset: FRAC_PI_2,
            }))?;
            let minus = overlap(Some(GateShift {
                gate,
                offset: -FRAC_PI_2,
            }))?;
            *g -= (plus - minus) / 2.0;
        }
    }
    Ok(CostEvaluation {
        cost,
        gradient: GradientReport::new(grad),
        estimates: None,
    })
}

/// Loschmidt-echo cost and gradient over the states held in `target`.
pub fn let_value_and_gradient(
    problem: &CompilationProblem,
    target: &TargetData,
    params: &[f64],
) -> Result<CostEvaluation> {
    let ansatz = problem.ansatz();
    let count = target.states.len() as f64;
    let mut fid = 0.0;
    let mut grad = vec![0.0; ansatz.param_count()];
    for (psi, out) in target.states.iter().zip(&target.outputs) {
        fid += fidelity_pure(out, &ansatz.apply(params, psi)?)?;
        for (i, g) in grad.iter_mut().enumerate() {
            *g -= shift_rule(ansatz, params, psi, i, |s| fidelity_pure(out, s))? / count;
        }
    }
    let cost = (1.0 - fid / count).max(0.0);
    Ok(CostEvaluation {
        cost,
        gradient: GradientReport::new(grad),
        estimates: None,
    })
}

/// Cost and gradient of any kind. `target` must carry expectations when
/// `kind` is `Qwc`.
pub fn value_and_gradient(
    problem: &CompilationProblem,
    target: &TargetData,
    kind: CostKind,
    params: &[f64],
) -> Result<CostEvaluation> {
    match kind {
        CostKind::Qwc => qwc_value_and_gradient(problem, target, params),
        CostKind::Hst => hst_value_and_gradient(problem, params),
        CostKind::Let => let_value_and_gradient(problem, target, params),
    }
}

/// Gradient of the Hilbert-Schmidt or Loschmidt-echo cost (the Wasserstein
/// cost is accepted too and forwarded to [`qwc_gradient`]).
pub fn cost_gradient(
    problem: &CompilationProblem,
    params: &[f64],
    kind: CostKind,
) -> Result<GradientReport> {
    let target = TargetData::new(problem, problem.ensemble().to_vec(), kind == CostKind::Qwc)?;
    Ok(value_and_gradient(problem, &target, kind, params)?.gradient)
}
