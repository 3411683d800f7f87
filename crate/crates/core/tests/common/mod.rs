//! Independent reference implementations shared by the integration tests.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C;
use qwc::lp::LinearProgram;
use qwc::simulator::GateKind;
use qwc::{ParamCircuit, StateVector};
use rand::Rng;
use rand_distr::StandardNormal;

pub type CMat = DMatrix<C>;

pub fn ry(theta: f64) -> CMat {
    let (s, c) = (theta / 2.0).sin_cos();
    CMat::from_row_slice(2, 2, &[c.into(), (-s).into(), s.into(), c.into()])
}

pub fn rz(theta: f64) -> CMat {
    let e = C::from_polar(1.0, -theta / 2.0);
    CMat::from_row_slice(2, 2, &[e, 0.0.into(), 0.0.into(), e.conj()])
}

/// Embeds a one-qubit matrix on `q`; qubit 0 is the least significant bit,
/// so it sits rightmost in the Kronecker product.
pub fn embed(n: usize, q: usize, m: &CMat) -> CMat {
    let mut out = CMat::identity(1, 1);
    for j in (0..n).rev() {
        out = if j == q {
            out.kronecker(m)
        } else {
            out.kronecker(&CMat::identity(2, 2))
        };
    }
    out
}

pub fn cx(n: usize, control: usize, target: usize) -> CMat {
    let dim = 1 << n;
    let mut m = CMat::zeros(dim, dim);
    for j in 0..dim {
        let i = if j >> control & 1 == 1 {
            j ^ (1 << target)
        } else {
            j
        };
        m[(i, j)] = 1.0.into();
    }
    m
}

/// Dense unitary of a circuit by multiplying gate matrices.
pub fn dense_unitary(c: &ParamCircuit, params: &[f64]) -> CMat {
    let n = c.n();
    let mut u = CMat::identity(1 << n, 1 << n);
    for g in c.gates() {
        let q = g.qubits();
        let theta = || match g.angle().unwrap() {
            qwc::simulator::Angle::Fixed(a) => a,
            qwc::simulator::Angle::Param(i) => params[i],
        };
        let m = match g.kind() {
            GateKind::Ry => embed(n, q[0], &ry(theta())),
            GateKind::Rz => embed(n, q[0], &rz(theta())),
            GateKind::Cx => cx(n, q[0], q[1]),
        };
        u = m * u;
    }
    u
}

pub fn to_vec(s: &StateVector) -> DVector<C> {
    DVector::from_column_slice(s.amplitudes())
}

pub fn density(s: &StateVector) -> CMat {
    let v = to_vec(s);
    &v * v.adjoint()
}

/// `||rho - sigma||_1` from Hermitian eigenvalues.
pub fn trace_norm(a: &StateVector, b: &StateVector) -> f64 {
    let d = density(a) - density(b);
    d.symmetric_eigenvalues().iter().map(|e| e.abs()).sum()
}

pub fn haar_state<R: Rng + ?Sized>(n: usize, rng: &mut R) -> StateVector {
    let amps = (0..1usize << n)
        .map(|_| C::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    StateVector::from_amplitudes(amps).unwrap()
}

/// Haar unitary via QR of a complex Ginibre matrix with phase correction.
pub fn haar_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMat {
    let g = CMat::from_fn(dim, dim, |_, _| {
        C::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let qr = g.qr();
    let (q, r) = (qr.q(), qr.r());
    let phases = CMat::from_diagonal(&DVector::from_fn(dim, |i, _| r[(i, i)] / r[(i, i)].norm()));
    q * phases
}

/// Best objective over vertices of `{A x <= b, x >= 0}`, by brute force.
pub fn brute_force_lp(lp: &LinearProgram) -> Option<f64> {
    let (nv, nr) = (lp.num_vars(), lp.num_constraints());
    let total = nv + nr;
    let mut best: Option<f64> = None;
    for mask in 0u32..1 << total {
        if mask.count_ones() as usize != nv {
            continue;
        }
        let active: Vec<usize> = (0..total).filter(|i| mask >> i & 1 == 1).collect();
        let m = DMatrix::from_fn(nv, nv, |r, c| {
            let i = active[r];
            if i < nr {
                lp.coefficient(i, c)
            } else if i - nr == c {
                1.0
            } else {
                0.0
            }
        });
        let rhs = DVector::from_fn(nv, |r, _| {
            if active[r] < nr {
                lp.bounds()[active[r]]
            } else {
                0.0
            }
        });
        if m.determinant().abs() < 1e-10 {
            continue;
        }
        let Some(x) = m.lu().solve(&rhs) else {
            continue;
        };
        let feasible = x.iter().all(|&v| v >= -1e-9)
            && (0..nr).all(|i| {
                (0..nv).map(|j| lp.coefficient(i, j) * x[j]).sum::<f64>() <= lp.bounds()[i] + 1e-9
            });
        if feasible {
            let val: f64 = (0..nv).map(|j| lp.objective()[j] * x[j]).sum();
            best = Some(best.map_or(val, |b: f64| b.max(val)));
        }
    }
    best
}
