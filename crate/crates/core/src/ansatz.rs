//! Hardware-efficient ansatz construction, random product-state ensembles,
//! and target/ansatz problem generation.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::costs::CompilationProblem;
use crate::error::{QwcError, Result};
use crate::pauli::enumerate_k_local;
use crate::simulator::{Angle, Gate, ParamCircuit, StateVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Entanglement {
    Linear,
    Full,
}

impl Entanglement {
    pub fn name(self) -> &'static str {
        match self {
            Entanglement::Linear => "linear",
            Entanglement::Full => "full",
        }
    }
}

/// Placement of the rotation blocks around the entangling block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HeaLayout {
    /// Rotations, then entanglers: `2n` parameters.
    Single,
    /// Rotations, entanglers, rotations: `4n` parameters.
    #[default]
    Sandwich,
}

impl HeaLayout {
    pub fn name(self) -> &'static str {
        match self {
            HeaLayout::Single => "single",
            HeaLayout::Sandwich => "sandwich",
        }
    }
}

/// Single-layer HEA: `RY(p_i)` then `RZ(p_{n+i})` on every qubit, followed
/// by a CX block (nearest neighbours for `Linear`, all pairs `i < j` for
/// `Full`).
pub fn build_hea(n: usize, entanglement: Entanglement) -> Result<ParamCircuit> {
    build_hea_layout(n, entanglement, HeaLayout::Single)
}

/// HEA with the given layout. Every rotation block applies `RY` to all
/// qubits and then `RZ` to all qubits, each with its own parameter.
pub fn build_hea_layout(
    n: usize,
    entanglement: Entanglement,
    layout: HeaLayout,
) -> Result<ParamCircuit> {
    if n < 2 {
        return Err(QwcError::InvalidArgument(format!(
            "HEA needs n >= 2, got {n}"
        )));
    }
    let blocks = match layout {
        HeaLayout::Single => 1,
        HeaLayout::Sandwich => 2,
    };
    let mut gates = Vec::with_capacity(2 * n * blocks + n * (n - 1) / 2);
    let rotations = |gates: &mut Vec<Gate>, offset: usize| {
        for q in 0..n {
            gates.push(Gate::ry(q, Angle::Param(offset + q)));
            gates.push(Gate::rz(q, Angle::Param(offset + n + q)));
        }
    };
    rotations(&mut gates, 0);
    match entanglement {
        Entanglement::Linear => gates.extend((0..n - 1).map(|i| Gate::cx(i, i + 1))),
        Entanglement::Full => {
            for i in 0..n {
                for j in i + 1..n {
                    gates.push(Gate::cx(i, j));
                }
            }
        }
    }
    if blocks == 2 {
        rotations(&mut gates, 2 * n);
    }
    ParamCircuit::new(n, gates, 2 * n * blocks)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EnsembleMode {
    /// One set of probe states for the whole run.
    #[default]
    Fixed,
    /// Fresh probe states every optimization step.
    Resampled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub n: usize,
    pub size: usize,
    #[serde(default)]
    pub mode: EnsembleMode,
    pub seed: u64,
}

impl EnsembleSpec {
    pub fn fixed(n: usize, size: usize, seed: u64) -> Self {
        Self {
            n,
            size,
            mode: EnsembleMode::Fixed,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.size == 0 {
            return Err(QwcError::InvalidArgument(
                "ensemble size must be >= 1".into(),
            ));
        }
        if self.n == 0 {
            return Err(QwcError::InvalidArgument("ensemble needs n >= 1".into()));
        }
        Ok(())
    }

    /// Draws the ensemble from an rng seeded with `self.seed`.
    pub fn sample(&self) -> Result<Vec<StateVector>> {
        random_product_ensemble(self, &mut ChaCha8Rng::seed_from_u64(self.seed))
    }
}

/// Uniform draw on `(-pi, pi]`.
pub fn uniform_angle<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    // u in [0, 1) maps to (-pi, pi]
    PI - 2.0 * PI * rng.random::<f64>()
}

/// `U3(theta, phi, lambda)|0> = RZ(lambda) RY(phi) RZ(theta) |0>`.
pub fn u3_on_zero(theta: f64, phi: f64, lambda: f64) -> [Complex64; 2] {
    let (s, c) = (phi / 2.0).sin_cos();
    // RZ(theta)|0> only contributes a global phase
    let phase0 = Complex64::from_polar(1.0, -theta / 2.0);
    [
        phase0 * Complex64::from_polar(c, -lambda / 2.0),
        phase0 * Complex64::from_polar(s, lambda / 2.0),
    ]
}

pub fn random_product_state<R: Rng + ?Sized>(n: usize, rng: &mut R) -> StateVector {
    let qubits: Vec<[Complex64; 2]> = (0..n)
        .map(|_| {
            let theta = uniform_angle(rng);
            let phi = uniform_angle(rng);
            let lambda = uniform_angle(rng);
            u3_on_zero(theta, phi, lambda)
        })
        .collect();
    StateVector::product(&qubits)
}

pub fn random_product_ensemble<R: Rng + ?Sized>(
    spec: &EnsembleSpec,
    rng: &mut R,
) -> Result<Vec<StateVector>> {
    spec.validate()?;
    Ok((0..spec.size)
        .map(|_| random_product_state(spec.n, rng))
        .collect())
}

pub fn random_params<R: Rng + ?Sized>(count: usize, rng: &mut R) -> Vec<f64> {
    (0..count).map(|_| uniform_angle(rng)).collect()
}

/// Independent seed for run `run` of an experiment seeded with `base`.
pub fn derive_seed(base: u64, run: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(base);
    rng.set_stream(run);
    rng.next_u64()
}

/// HEA target with random fixed parameters plus the same HEA as ansatz with
/// independent random initial parameters.
pub fn make_problem(
    n: usize,
    entanglement: Entanglement,
    k: usize,
    ensemble: EnsembleSpec,
    seed: u64,
) -> Result<CompilationProblem> {
    make_problem_with_layout(n, entanglement, HeaLayout::default(), k, ensemble, seed)
}

pub fn make_problem_with_layout(
    n: usize,
    entanglement: Entanglement,
    layout: HeaLayout,
    k: usize,
    ensemble: EnsembleSpec,
    seed: u64,
) -> Result<CompilationProblem> {
    if ensemble.n != n {
        return Err(QwcError::DimensionMismatch {
            expected: n,
            found: ensemble.n,
        });
    }
    let circuit = build_hea_layout(n, entanglement, layout)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let target_params = random_params(circuit.param_count(), &mut rng);
    let initial_params = random_params(circuit.param_count(), &mut rng);
    let observables = enumerate_k_local(n, k)?;
    let states = ensemble.sample()?;
    CompilationProblem::new(
        circuit.clone(),
        target_params,
        circuit,
        initial_params,
        states,
        ensemble,
        observables,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulator::GateKind;

    fn cx_count(c: &ParamCircuit) -> usize {
        c.gates()
            .iter()
            .filter(|g| g.kind() == GateKind::Cx)
            .count()
    }

    #[test]
    fn hea_counts() {
        for n in 2..=8 {
            let lin = build_hea(n, Entanglement::Linear).unwrap();
            let full = build_hea(n, Entanglement::Full).unwrap();
            assert_eq!(lin.param_count(), 2 * n);
            assert_eq!(full.param_count(), 2 * n);
            assert_eq!(cx_count(&lin), n - 1);
            assert_eq!(cx_count(&full), n * (n - 1) / 2);
        }
        assert_eq!(cx_count(&build_hea(4, Entanglement::Full).unwrap()), 6);
        assert_eq!(
            build_hea(2, Entanglement::Linear).unwrap(),
            build_hea(2, Entanglement::Full).unwrap()
        );
        assert!(build_hea(1, Entanglement::Linear).is_err());
    }

    #[test]
    fn sandwich_layout() {
        let c = build_hea_layout(4, Entanglement::Linear, HeaLayout::Sandwich).unwrap();
        assert_eq!(c.param_count(), 16);
        assert_eq!(cx_count(&c), 3);
        let last = c.gates().last().unwrap();
        assert_eq!((last.kind(), last.param_index()), (GateKind::Rz, Some(15)));
        assert_eq!(HeaLayout::default(), HeaLayout::Sandwich);
    }

    #[test]
    fn u3_zero_angles_is_zero_state() {
        let s = StateVector::product(&[u3_on_zero(0.0, 0.0, 0.0); 3]);
        assert_eq!(s, StateVector::zero(3));
    }

    #[test]
    fn u3_matches_gate_sequence() {
        let circ = ParamCircuit::from_gates(
            1,
            vec![
                Gate::rz(0, Angle::Param(0)),
                Gate::ry(0, Angle::Param(1)),
                Gate::rz(0, Angle::Param(2)),
            ],
        )
        .unwrap();
        let (t, p, l) = (0.4, -1.3, 2.2);
        let via_circuit = circ.apply(&[t, p, l], &StateVector::zero(1)).unwrap();
        let direct = u3_on_zero(t, p, l);
        for (a, b) in via_circuit.amplitudes().iter().zip(direct.iter()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn ensemble_is_deterministic_and_normalized() {
        let spec = EnsembleSpec::fixed(3, 5, 42);
        let a = spec.sample().unwrap();
        let b = spec.sample().unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 5);
        for s in &a {
            assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
        }
        let bad = EnsembleSpec::fixed(3, 0, 1);
        assert!(bad.sample().is_err());
    }

    #[test]
    fn angles_in_half_open_interval() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10_000 {
            let a = uniform_angle(&mut rng);
            assert!(a > -PI && a <= PI);
        }
    }

    #[test]
    fn problem_determinism() {
        let spec = EnsembleSpec::fixed(4, 8, 9);
        let a = make_problem(4, Entanglement::Full, 2, spec, 17).unwrap();
        let b = make_problem(4, Entanglement::Full, 2, spec, 17).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.observables().len(), 66);
        let c = make_problem(4, Entanglement::Full, 2, spec, 18).unwrap();
        assert_ne!(a.target_params(), c.target_params());
    }
}
