//! Self-checks run by `qwc verify`: gradients against finite differences,
//! simplex against vertex enumeration, and W1 metric properties.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::ansatz::{derive_seed, make_problem, EnsembleSpec, Entanglement};
use crate::costs::{average_fidelity, evaluate, hst_cost, CostKind};
use crate::error::Result;
use crate::gradients::cost_gradient;
use crate::lp::{solve_simplex, LinearProgram, LpStatus};
use crate::simulator::{Angle, Gate, ParamCircuit, StateVector, UnitaryMatrix};
use crate::wasserstein::{trace_norm_pure, w1_distance, QUBIT_WEIGHT_BOUND};

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    /// Worst observed error, or a count of failures.
    pub detail: String,
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag} {:<28} {}", self.name, self.detail)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Random 3-qubit problems for the gradient check.
    pub gradient_instances: usize,
    pub lp_instances: usize,
    pub state_pairs: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            gradient_instances: 100,
            lp_instances: 200,
            state_pairs: 1000,
        }
    }
}

fn outcome(name: &'static str, worst: f64, tol: f64) -> CheckOutcome {
    CheckOutcome {
        name,
        passed: worst <= tol,
        detail: format!("max err {worst:.3e} (tol {tol:.0e})"),
    }
}

/// Central differences with `h = 1e-5` against the shift rule, all costs.
pub fn check_gradients(opts: &VerifyOptions) -> Result<CheckOutcome> {
    let h = 1e-5;
    let mut worst = 0.0f64;
    for i in 0..opts.gradient_instances {
        let s = derive_seed(opts.seed, i as u64);
        let spec = EnsembleSpec::fixed(3, 4, s ^ 1);
        let p = make_problem(3, Entanglement::Full, 2, spec, s)?;
        let params = p.initial_params().to_vec();
        for kind in CostKind::ALL {
            let g = cost_gradient(&p, &params, kind)?;
            for j in 0..params.len() {
                let mut up = params.clone();
                let mut dn = params.clone();
                up[j] += h;
                dn[j] -= h;
                let fd = (evaluate(&p, kind, &up)? - evaluate(&p, kind, &dn)?) / (2.0 * h);
                worst = worst.max((fd - g.grad[j]).abs());
            }
        }
    }
    Ok(outcome("gradient vs finite diff", worst, 1e-5))
}

/// Solves `m x = rhs` by Gaussian elimination; `None` if singular.
fn solve_dense(mut m: Vec<Vec<f64>>, mut rhs: Vec<f64>) -> Option<Vec<f64>> {
    let n = rhs.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))?;
        if m[piv][col].abs() < 1e-10 {
            return None;
        }
        m.swap(col, piv);
        rhs.swap(col, piv);
        for r in 0..n {
            if r != col {
                let f = m[r][col] / m[col][col];
                for c in col..n {
                    m[r][c] -= f * m[col][c];
                }
                rhs[r] -= f * rhs[col];
            }
        }
    }
    Some((0..n).map(|i| rhs[i] / m[i][i]).collect())
}

/// Best objective over all vertices of `{A x <= b, x >= 0}`.
pub fn vertex_enumeration_optimum(lp: &LinearProgram) -> Option<f64> {
    let (nv, nr) = (lp.num_vars(), lp.num_constraints());
    // rows 0..nr are constraints, nr.. are x_j >= 0
    let row = |i: usize| -> (Vec<f64>, f64) {
        if i < nr {
            (
                (0..nv).map(|j| lp.coefficient(i, j)).collect(),
                lp.bounds()[i],
            )
        } else {
            let mut e = vec![0.0; nv];
            e[i - nr] = 1.0;
            (e, 0.0)
        }
    };
    let total = nr + nv;
    let mut best: Option<f64> = None;
    for mask in 0u32..(1 << total) {
        if mask.count_ones() as usize != nv {
            continue;
        }
        let (m, rhs): (Vec<_>, Vec<_>) = (0..total).filter(|i| mask >> i & 1 == 1).map(row).unzip();
        let Some(x) = solve_dense(m, rhs) else {
            continue;
        };
        if x.iter().any(|&v| v < -1e-9) || lp.max_violation(&x) > 1e-9 {
            continue;
        }
        let val: f64 = x.iter().zip(lp.objective()).map(|(a, b)| a * b).sum();
        best = Some(best.map_or(val, |b: f64| b.max(val)));
    }
    best
}

/// Random bounded LP with up to 8 variables and 4 constraints.
pub fn random_bounded_lp<R: Rng + ?Sized>(rng: &mut R) -> Result<LinearProgram> {
    let nv = rng.random_range(1..=8);
    let nr = rng.random_range(1..=4);
    let objective = (0..nv).map(|_| rng.random_range(-1.0..1.0)).collect();
    let mut rows: Vec<Vec<f64>> = (0..nr - 1)
        .map(|_| (0..nv).map(|_| rng.random_range(-1.0..1.0)).collect())
        .collect();
    // one strictly positive row keeps the polytope bounded
    rows.push((0..nv).map(|_| rng.random_range(0.1..1.0)).collect());
    let bounds = (0..nr).map(|_| rng.random_range(0.0..1.0)).collect();
    LinearProgram::from_rows(objective, &rows, bounds)
}

pub fn check_simplex(opts: &VerifyOptions) -> Result<CheckOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x5151);
    let mut worst = 0.0f64;
    for _ in 0..opts.lp_instances {
        let lp = random_bounded_lp(&mut rng)?;
        let sol = solve_simplex(&lp)?;
        let err = match (sol.status, vertex_enumeration_optimum(&lp)) {
            (LpStatus::Optimal, Some(v)) => (sol.objective_value - v).abs(),
            _ => f64::INFINITY,
        };
        worst = worst.max(err);
    }
    Ok(outcome("simplex vs vertices", worst, 1e-8))
}

/// Haar-random pure state from normalized Gaussian amplitudes.
pub fn random_pure_state<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<StateVector> {
    let amps = (0..1usize << n)
        .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    StateVector::from_amplitudes(amps)
}

/// Symmetry, triangle inequality, monotonicity in k, the trace-norm bound,
/// and the per-qubit weight constraint of the W1 optimum.
pub fn check_w1_properties(opts: &VerifyOptions) -> Result<Vec<CheckOutcome>> {
    let tol = 1e-8;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0xa11ce);
    let (mut sym, mut tri, mut mono, mut bound, mut load) =
        (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let mut too_many_active = 0usize;
    for i in 0..opts.state_pairs {
        let n = 2 + i % 3;
        let a = random_pure_state(n, &mut rng)?;
        let b = random_pure_state(n, &mut rng)?;
        let c = random_pure_state(n, &mut rng)?;
        let k = 1 + i % n;
        let ab = w1_distance(&a, &b, k)?;
        sym = sym.max((ab.value - w1_distance(&b, &a, k)?.value).abs());
        let via = w1_distance(&a, &c, k)?.value + w1_distance(&c, &b, k)?.value;
        tri = tri.max(ab.value - via);
        if k < n {
            mono = mono.max(ab.value - w1_distance(&a, &b, k + 1)?.value);
        }
        bound = bound.max(ab.value - n as f64 / 2.0 * trace_norm_pure(&a, &b)?);
        let loads = ab.hamiltonian.qubit_loads();
        load = load.max(loads.iter().fold(0.0f64, |m, &l| m.max(l)) - QUBIT_WEIGHT_BOUND);
        if ab.hamiltonian.active_count() > n {
            too_many_active += 1;
        }
    }
    Ok(vec![
        outcome("w1 symmetry", sym, tol),
        outcome("w1 triangle inequality", tri, tol),
        outcome("w1 monotone in k", mono, tol),
        outcome("w1 trace-norm bound", bound, tol),
        outcome("w1 qubit weight bound", load, tol),
        CheckOutcome {
            name: "w1 active terms <= n",
            passed: too_many_active == 0,
            detail: format!("{too_many_active} violation(s)"),
        },
    ])
}

/// Known values on one-qubit states and gates.
pub fn check_spot_values() -> Result<CheckOutcome> {
    let zero = StateVector::zero(1);
    let one = StateVector::basis(1, 1);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let plus = StateVector::product(&[[Complex64::new(h, 0.0), Complex64::new(h, 0.0)]]);
    let mut worst = (w1_distance(&zero, &one, 1)?.value - 1.0).abs();
    worst = worst.max((w1_distance(&zero, &plus, 1)?.value - 0.5).abs());
    let rz = ParamCircuit::from_gates(1, vec![Gate::rz(0, Angle::Param(0))])?;
    let id = UnitaryMatrix::identity(1);
    for i in 0..=32 {
        let theta = -PI + 2.0 * PI * i as f64 / 32.0;
        let c = (theta / 2.0).cos();
        worst = worst.max((hst_cost(&id, &rz.unitary(&[theta])?)? - (1.0 - c * c)).abs());
    }
    // RZ(pi) is Z up to a global phase
    let z = rz.unitary(&[PI])?;
    worst = worst.max((average_fidelity(&id, &z)? - 1.0 / 3.0).abs());
    Ok(outcome("closed-form spot values", worst, 1e-9))
}

pub fn run_all(opts: &VerifyOptions) -> Result<Vec<CheckOutcome>> {
    let mut out = vec![
        check_spot_values()?,
        check_gradients(opts)?,
        check_simplex(opts)?,
    ];
    out.extend(check_w1_properties(opts)?);
    Ok(out)
}
