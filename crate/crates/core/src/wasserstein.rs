//! k-local quantum W1 estimation through its dual linear program.
//!
//! For states `rho`, `sigma` and a set of k-local Pauli strings `H_m`, the
//! estimate is
//!
//! ```text
//! max  sum_m w_m c_m,   c_m = Tr[rho H_m] - Tr[sigma H_m]
//! s.t. sum_{m : i in supp(H_m)} |w_m| <= 1/2   for every qubit i
//! ```
//!
//! Each weight is split as `w_m = u_m - v_m` with `u, v >= 0`, which turns
//! the absolute values into a standard-form LP. The maximizing observable
//! `H_W = sum_m w_m H_m` is the discriminator used for gradients.

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, QwcError, Result};
use crate::lp::{solve_simplex, LinearProgram, LpStatus};
use crate::pauli::{enumerate_k_local, ObservableSet, PauliString};
use crate::simulator::{fidelity_pure, StateVector};

/// Weights below this magnitude are treated as inactive.
pub const ACTIVE_WEIGHT_TOLERANCE: f64 = 1e-9;

/// Per-qubit bound on the summed absolute weights.
pub const QUBIT_WEIGHT_BOUND: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedPauli {
    pub pauli: PauliString,
    pub weight: f64,
}

/// Sparse weighted Pauli sum. Serializes as a JSON list of
/// `{pauli, weight}` objects.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct WassersteinHamiltonian {
    n: usize,
    terms: Vec<WeightedPauli>,
}

impl WassersteinHamiltonian {
    pub fn new(n: usize, terms: Vec<WeightedPauli>) -> Result<Self> {
        for t in &terms {
            check_dim(n, t.pauli.n())?;
        }
        Ok(Self { n, terms })
    }

    pub fn zero(n: usize) -> Self {
        Self {
            n,
            terms: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[WeightedPauli] {
        &self.terms
    }

    /// Terms whose weight exceeds [`ACTIVE_WEIGHT_TOLERANCE`].
    pub fn active_terms(&self) -> impl Iterator<Item = &WeightedPauli> {
        self.terms
            .iter()
            .filter(|t| t.weight.abs() > ACTIVE_WEIGHT_TOLERANCE)
    }

    pub fn active_count(&self) -> usize {
        self.active_terms().count()
    }

    /// `sum_{terms touching qubit} |w_m|` for every qubit.
    pub fn qubit_loads(&self) -> Vec<f64> {
        let mut loads = vec![0.0; self.n];
        for t in &self.terms {
            for &q in t.pauli.support() {
                loads[q] += t.weight.abs();
            }
        }
        loads
    }

    /// `<state|H_W|state>`.
    pub fn expectation(&self, state: &StateVector) -> Result<f64> {
        check_dim(self.n, state.n())?;
        self.active_terms()
            .map(|t| Ok(t.weight * t.pauli.expectation(state)?))
            .sum()
    }
}

impl Serialize for WassersteinHamiltonian {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.terms.serialize(s)
    }
}

impl<'de> Deserialize<'de> for WassersteinHamiltonian {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let terms = Vec::<WeightedPauli>::deserialize(d)?;
        let n = terms.first().map_or(0, |t| t.pauli.n());
        Self::new(n, terms).map_err(serde::de::Error::custom)
    }
}

/// Result of one W1 estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct W1Estimate {
    pub value: f64,
    pub hamiltonian: WassersteinHamiltonian,
    /// `c_m`, aligned with the observable set.
    pub expectation_diffs: Vec<f64>,
}

/// `c_m = Tr[gen H_m] - Tr[tgt H_m]`. When `target_cache` is given it holds
/// the target-side expectations and `tgt_state` is not evaluated.
pub fn expectation_differences(
    gen_state: &StateVector,
    tgt_state: &StateVector,
    obs: &ObservableSet,
    target_cache: Option<&[f64]>,
) -> Result<Vec<f64>> {
    check_dim(obs.n(), gen_state.n())?;
    check_dim(obs.n(), tgt_state.n())?;
    let gen = obs.expectations(gen_state)?;
    match target_cache {
        Some(cached) => {
            check_dim(obs.len(), cached.len())?;
            Ok(gen.iter().zip(cached).map(|(g, t)| g - t).collect())
        }
        None => {
            let tgt = obs.expectations(tgt_state)?;
            Ok(gen.iter().zip(&tgt).map(|(g, t)| g - t).collect())
        }
    }
}

/// LP over `2 |obs|` variables `(u_0, v_0, u_1, v_1, ...)` with one
/// constraint per qubit.
pub fn build_w1_lp(c: &[f64], obs: &ObservableSet) -> Result<LinearProgram> {
    check_dim(obs.len(), c.len())?;
    let n = obs.n();
    let vars = 2 * obs.len();
    let mut objective = Vec::with_capacity(vars);
    for &cm in c {
        objective.push(cm);
        objective.push(-cm);
    }
    let mut constraints = vec![0.0; n * vars];
    for (m, p) in obs.strings().iter().enumerate() {
        for &q in p.support() {
            constraints[q * vars + 2 * m] = 1.0;
            constraints[q * vars + 2 * m + 1] = 1.0;
        }
    }
    LinearProgram::new(objective, constraints, vec![QUBIT_WEIGHT_BOUND; n])
}

/// Solves the dual LP for given expectation differences.
pub fn w1_from_differences(c: Vec<f64>, obs: &ObservableSet) -> Result<W1Estimate> {
    let lp = build_w1_lp(&c, obs)?;
    let sol = solve_simplex(&lp)?;
    if sol.status != LpStatus::Optimal {
        // x = 0 is feasible and the box is bounded, so this is a construction bug
        return Err(QwcError::Unbounded);
    }
    let mut terms = Vec::new();
    let mut value = 0.0;
    for (m, p) in obs.strings().iter().enumerate() {
        let w = sol.x[2 * m] - sol.x[2 * m + 1];
        if w.abs() > ACTIVE_WEIGHT_TOLERANCE {
            value += w * c[m];
            terms.push(WeightedPauli {
                pauli: p.clone(),
                weight: w,
            });
        }
    }
    Ok(W1Estimate {
        value,
        hamiltonian: WassersteinHamiltonian { n: obs.n(), terms },
        expectation_diffs: c,
    })
}

/// W1 estimate restricted to a precomputed observable set.
pub fn w1_with_observables(
    state_a: &StateVector,
    state_b: &StateVector,
    obs: &ObservableSet,
) -> Result<W1Estimate> {
    let c = expectation_differences(state_a, state_b, obs, None)?;
    w1_from_differences(c, obs)
}

pub fn w1_distance(state_a: &StateVector, state_b: &StateVector, k: usize) -> Result<W1Estimate> {
    check_dim(state_a.n(), state_b.n())?;
    let obs = enumerate_k_local(state_a.n(), k)?;
    w1_with_observables(state_a, state_b, &obs)
}

/// `|| |a><a| - |b><b| ||_1 = 2 sqrt(1 - |<a|b>|^2)`.
pub fn trace_norm_pure(a: &StateVector, b: &StateVector) -> Result<f64> {
    let f = fidelity_pure(a, b)?.min(1.0);
    Ok(2.0 * (1.0 - f).sqrt())
}
