//! Compilation costs: the empirical Wasserstein cost, the Hilbert-Schmidt
//! test, the generalized Loschmidt echo, and the fidelity measures used to
//! report results.

use serde::{Deserialize, Serialize};

use crate::ansatz::EnsembleSpec;
use crate::error::{check_dim, QwcError, Result};
use crate::pauli::ObservableSet;
use crate::simulator::{fidelity_pure, ParamCircuit, StateVector, UnitaryMatrix};
use crate::wasserstein::{expectation_differences, w1_from_differences, W1Estimate};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CostKind {
    Qwc,
    Hst,
    Let,
}

impl CostKind {
    pub const ALL: [CostKind; 3] = [CostKind::Qwc, CostKind::Hst, CostKind::Let];

    pub fn name(self) -> &'static str {
        match self {
            CostKind::Qwc => "qwc",
            CostKind::Hst => "hst",
            CostKind::Let => "let",
        }
    }
}

impl std::fmt::Display for CostKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for CostKind {
    type Err = QwcError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "qwc" => Ok(CostKind::Qwc),
            "hst" => Ok(CostKind::Hst),
            "let" => Ok(CostKind::Let),
            other => Err(QwcError::InvalidArgument(format!(
                "unknown cost kind {other:?}"
            ))),
        }
    }
}

/// A fixed target circuit, a trainable ansatz, the probe ensemble and the
/// observable set the discriminator may use.
#[derive(Debug, Clone, PartialEq)]
pub struct CompilationProblem {
    target: ParamCircuit,
    target_params: Vec<f64>,
    ansatz: ParamCircuit,
    initial_params: Vec<f64>,
    ensemble: Vec<StateVector>,
    ensemble_spec: EnsembleSpec,
    observables: ObservableSet,
}

impl CompilationProblem {
    pub fn new(
        target: ParamCircuit,
        target_params: Vec<f64>,
        ansatz: ParamCircuit,
        initial_params: Vec<f64>,
        ensemble: Vec<StateVector>,
        ensemble_spec: EnsembleSpec,
        observables: ObservableSet,
    ) -> Result<Self> {
        let n = target.n();
        check_dim(n, ansatz.n())?;
        check_dim(n, observables.n())?;
        check_dim(n, ensemble_spec.n)?;
        check_dim(target.param_count(), target_params.len())?;
        check_dim(ansatz.param_count(), initial_params.len())?;
        if ensemble.is_empty() {
            return Err(QwcError::InvalidArgument(
                "ensemble must not be empty".into(),
            ));
        }
        for s in &ensemble {
            check_dim(n, s.n())?;
        }
        Ok(Self {
            target,
            target_params,
            ansatz,
            initial_params,
            ensemble,
            ensemble_spec,
            observables,
        })
    }

    pub fn n(&self) -> usize {
        self.target.n()
    }

    pub fn k(&self) -> usize {
        self.observables.k()
    }

    pub fn target(&self) -> &ParamCircuit {
        &self.target
    }

    pub fn target_params(&self) -> &[f64] {
        &self.target_params
    }

    pub fn ansatz(&self) -> &ParamCircuit {
        &self.ansatz
    }

    pub fn initial_params(&self) -> &[f64] {
        &self.initial_params
    }

    pub fn ensemble(&self) -> &[StateVector] {
        &self.ensemble
    }

    pub fn ensemble_spec(&self) -> &EnsembleSpec {
        &self.ensemble_spec
    }

    pub fn observables(&self) -> &ObservableSet {
        &self.observables
    }

    /// Copy of the problem whose ansatz starts at `params`.
    pub fn with_initial_params(&self, params: Vec<f64>) -> Result<Self> {
        check_dim(self.ansatz.param_count(), params.len())?;
        Ok(Self {
            initial_params: params,
            ..self.clone()
        })
    }

    pub fn target_unitary(&self) -> Result<UnitaryMatrix> {
        self.target.unitary(&self.target_params)
    }

    pub fn ansatz_unitary(&self, params: &[f64]) -> Result<UnitaryMatrix> {
        self.ansatz.unitary(params)
    }
}

/// Target-side data for one ensemble: the outputs `V|psi>` and, when
/// requested, their expectation values on every observable.
#[derive(Debug, Clone, PartialEq)]
pub struct TargetData {
    pub states: Vec<StateVector>,
    pub outputs: Vec<StateVector>,
    pub expectations: Option<Vec<Vec<f64>>>,
}

impl TargetData {
    pub fn new(
        problem: &CompilationProblem,
        states: Vec<StateVector>,
        with_expectations: bool,
    ) -> Result<Self> {
        let outputs = states
            .iter()
            .map(|s| problem.target.apply(&problem.target_params, s))
            .collect::<Result<Vec<_>>>()?;
        let expectations = if with_expectations {
            Some(
                outputs
                    .iter()
                    .map(|o| problem.observables.expectations(o))
                    .collect::<Result<Vec<_>>>()?,
            )
        } else {
            None
        };
        Ok(Self {
            states,
            outputs,
            expectations,
        })
    }

    /// Number of target-side Pauli expectations this cache holds.
    pub fn cached_evaluations(&self) -> usize {
        self.expectations
            .as_ref()
            .map_or(0, |e| e.iter().map(Vec::len).sum())
    }
}

/// Per-state W1 estimates between `U(params)|psi>` and `V|psi>`.
pub fn qwc_estimates(
    problem: &CompilationProblem,
    target: &TargetData,
    params: &[f64],
) -> Result<Vec<W1Estimate>> {
    target
        .states
        .iter()
        .enumerate()
        .map(|(a, psi)| {
            let gen = problem.ansatz.apply(params, psi)?;
            let cached = target.expectations.as_ref().map(|e| e[a].as_slice());
            let c =
                expectation_differences(&gen, &target.outputs[a], &problem.observables, cached)?;
            w1_from_differences(c, &problem.observables)
        })
        .collect()
}

/// Mean of squared per-state distances.
pub fn mean_square(estimates: &[W1Estimate]) -> f64 {
    estimates.iter().map(|e| e.value * e.value).sum::<f64>() / estimates.len() as f64
}

/// `(1/|A|) sum_psi W1^(k)(U(params)|psi>, V|psi>)^2`.
pub fn qwc_cost(problem: &CompilationProblem, params: &[f64]) -> Result<f64> {
    let target = TargetData::new(problem, problem.ensemble.clone(), true)?;
    Ok(mean_square(&qwc_estimates(problem, &target, params)?))
}

/// `1 - |Tr(V^dagger U)|^2 / 4^n`.
pub fn hst_cost(u: &UnitaryMatrix, v: &UnitaryMatrix) -> Result<f64> {
    let overlap = v.trace_adjoint_product(u)?.norm_sqr();
    let dim = u.dim() as f64;
    Ok((1.0 - overlap / (dim * dim)).clamp(0.0, 1.0))
}

/// `(2^n + |Tr(V^dagger U)|^2) / (4^n + 2^n)`.
pub fn average_fidelity(u: &UnitaryMatrix, v: &UnitaryMatrix) -> Result<f64> {
    let overlap = v.trace_adjoint_product(u)?.norm_sqr();
    let dim = u.dim() as f64;
    Ok(((dim + overlap) / (dim * dim + dim)).clamp(0.0, 1.0))
}

pub(crate) fn overlaps(outputs: &[StateVector], generated: &[StateVector]) -> Result<f64> {
    let total = outputs
        .iter()
        .zip(generated)
        .map(|(t, g)| fidelity_pure(t, g))
        .sum::<Result<f64>>()?;
    Ok(total / outputs.len() as f64)
}

/// Mean of `|<psi| V^dagger U(params) |psi>|^2` over the ensemble.
pub fn set_average_fidelity(problem: &CompilationProblem, params: &[f64]) -> Result<f64> {
    let target = TargetData::new(problem, problem.ensemble.clone(), false)?;
    set_average_fidelity_with(problem, &target, params)
}

pub fn set_average_fidelity_with(
    problem: &CompilationProblem,
    target: &TargetData,
    params: &[f64],
) -> Result<f64> {
    let generated = target
        .states
        .iter()
        .map(|s| problem.ansatz.apply(params, s))
        .collect::<Result<Vec<_>>>()?;
    Ok(overlaps(&target.outputs, &generated)?.min(1.0))
}

/// `1 - (1/|A|) sum |<psi| V^dagger U |psi>|^2`.
pub fn let_cost(problem: &CompilationProblem, params: &[f64]) -> Result<f64> {
    Ok((1.0 - set_average_fidelity(problem, params)?).max(0.0))
}

/// Reported infidelity `1 - F_avg(U(params), V)` from the trace formula.
pub fn infidelity(problem: &CompilationProblem, params: &[f64]) -> Result<f64> {
    let u = problem.ansatz_unitary(params)?;
    let v = problem.target_unitary()?;
    Ok(1.0 - average_fidelity(&u, &v)?)
}

/// Cost of the given kind at `params`.
pub fn evaluate(problem: &CompilationProblem, kind: CostKind, params: &[f64]) -> Result<f64> {
    match kind {
        CostKind::Qwc => qwc_cost(problem, params),
        CostKind::Hst => hst_cost(&problem.ansatz_unitary(params)?, &problem.target_unitary()?),
        CostKind::Let => let_cost(problem, params),
    }
}
