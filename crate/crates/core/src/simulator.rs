//! Dense statevector simulation over the `{RY, RZ, CX}` gate set.
//!
//! Qubit ordering is little-endian throughout: qubit `q` is bit `q` of the
//! amplitude index. Rotation conventions are `RY(t) = exp(-i t Y / 2)` and
//! `RZ(t) = exp(-i t Z / 2)`.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, QwcError, Result};

/// Largest register `circuit_unitary` builds unless a caller raises the limit.
pub const DEFAULT_MAX_QUBITS: usize = 10;

// Hard ceiling for any dense statevector.
const STATE_QUBIT_LIMIT: usize = 30;

/// Pure state of `n` qubits stored as `2^n` amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// The all-zeros computational basis state.
    pub fn zero(n: usize) -> Self {
        Self::basis(n, 0)
    }

    /// Computational basis state `|index>`.
    ///
    /// Panics if `index >= 2^n` or `n` is beyond the dense simulation limit.
    pub fn basis(n: usize, index: usize) -> Self {
        assert!(
            n <= STATE_QUBIT_LIMIT,
            "{n} qubits is too large for a dense state"
        );
        let dim = 1usize << n;
        assert!(
            index < dim,
            "basis index {index} out of range for {n} qubits"
        );
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Self { n, amps }
    }

    /// Wraps raw amplitudes, renormalizing them.
    ///
    /// Fails when the length is not a power of two or the vector is zero.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(QwcError::InvalidArgument(format!(
                "amplitude count {len} is not a power of two"
            )));
        }
        let n = len.trailing_zeros() as usize;
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(QwcError::InvalidArgument(
                "state has zero or non-finite norm".into(),
            ));
        }
        let amps = amps.into_iter().map(|a| a / norm).collect();
        Ok(Self { n, amps })
    }

    /// Tensor product of single-qubit states; `qubits[q]` becomes qubit `q`.
    pub fn product(qubits: &[[Complex64; 2]]) -> Self {
        let mut amps = vec![Complex64::new(1.0, 0.0)];
        for (q, local) in qubits.iter().enumerate() {
            let stride = 1usize << q;
            let mut next = vec![Complex64::new(0.0, 0.0); stride * 2];
            for (i, a) in amps.iter().enumerate() {
                next[i] = a * local[0];
                next[i + stride] = a * local[1];
            }
            amps = next;
        }
        Self {
            n: qubits.len(),
            amps,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        check_dim(self.n, other.n)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Applies a 2x2 matrix `[[m00, m01], [m10, m11]]` to qubit `q`.
    fn apply_1q(&mut self, q: usize, m: [[Complex64; 2]; 2]) {
        let stride = 1usize << q;
        for block in (0..self.amps.len()).step_by(stride << 1) {
            for i in block..block + stride {
                let a0 = self.amps[i];
                let a1 = self.amps[i + stride];
                self.amps[i] = m[0][0] * a0 + m[0][1] * a1;
                self.amps[i + stride] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
    }

    fn apply_ry(&mut self, q: usize, theta: f64) {
        let (s, c) = (theta / 2.0).sin_cos();
        let c = Complex64::new(c, 0.0);
        let s = Complex64::new(s, 0.0);
        self.apply_1q(q, [[c, -s], [s, c]]);
    }

    fn apply_rz(&mut self, q: usize, theta: f64) {
        let lo = Complex64::from_polar(1.0, -theta / 2.0);
        let hi = lo.conj();
        let stride = 1usize << q;
        for (i, a) in self.amps.iter_mut().enumerate() {
            *a *= if i & stride == 0 { lo } else { hi };
        }
    }

    fn apply_cx(&mut self, control: usize, target: usize) {
        let cmask = 1usize << control;
        let tmask = 1usize << target;
        for i in 0..self.amps.len() {
            if i & cmask != 0 && i & tmask == 0 {
                self.amps.swap(i, i | tmask);
            }
        }
    }
}

/// Pure-state fidelity `|<a|b>|^2`.
pub fn fidelity_pure(a: &StateVector, b: &StateVector) -> Result<f64> {
    Ok(a.inner(b)?.norm_sqr())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GateKind {
    Ry,
    Rz,
    Cx,
}

impl GateKind {
    pub fn name(self) -> &'static str {
        match self {
            GateKind::Ry => "ry",
            GateKind::Rz => "rz",
            GateKind::Cx => "cx",
        }
    }
}

/// Where a rotation gate takes its angle from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Angle {
    Fixed(f64),
    Param(usize),
}

/// One gate of a circuit. For `Cx`, `qubits = [control, target]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GateRepr", into = "GateRepr")]
pub struct Gate {
    kind: GateKind,
    qubits: Vec<usize>,
    angle: Option<Angle>,
}

impl Gate {
    pub fn ry(qubit: usize, angle: Angle) -> Self {
        Self {
            kind: GateKind::Ry,
            qubits: vec![qubit],
            angle: Some(angle),
        }
    }

    pub fn rz(qubit: usize, angle: Angle) -> Self {
        Self {
            kind: GateKind::Rz,
            qubits: vec![qubit],
            angle: Some(angle),
        }
    }

    pub fn cx(control: usize, target: usize) -> Self {
        Self {
            kind: GateKind::Cx,
            qubits: vec![control, target],
            angle: None,
        }
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    pub fn qubits(&self) -> &[usize] {
        &self.qubits
    }

    pub fn angle(&self) -> Option<Angle> {
        self.angle
    }

    pub fn param_index(&self) -> Option<usize> {
        match self.angle {
            Some(Angle::Param(i)) => Some(i),
            _ => None,
        }
    }

    fn resolve_angle(&self, params: &[f64]) -> f64 {
        match self.angle {
            Some(Angle::Fixed(a)) => a,
            Some(Angle::Param(i)) => params[i],
            None => 0.0,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct GateRepr {
    kind: GateKind,
    qubits: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    param_index: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    angle: Option<f64>,
}

impl From<Gate> for GateRepr {
    fn from(g: Gate) -> Self {
        let (param_index, angle) = match g.angle {
            Some(Angle::Param(i)) => (Some(i), None),
            Some(Angle::Fixed(a)) => (None, Some(a)),
            None => (None, None),
        };
        Self {
            kind: g.kind,
            qubits: g.qubits,
            param_index,
            angle,
        }
    }
}

impl TryFrom<GateRepr> for Gate {
    type Error = QwcError;

    fn try_from(r: GateRepr) -> Result<Self> {
        let arity = if r.kind == GateKind::Cx { 2 } else { 1 };
        if r.qubits.len() != arity {
            return Err(QwcError::Circuit(format!(
                "{} gate needs {arity} qubit(s), got {}",
                r.kind.name(),
                r.qubits.len()
            )));
        }
        let angle = match (r.kind, r.param_index, r.angle) {
            (GateKind::Cx, None, None) => None,
            (GateKind::Cx, _, _) => {
                return Err(QwcError::Circuit("cx gate takes no angle".into()));
            }
            (_, Some(i), None) => Some(Angle::Param(i)),
            (_, None, Some(a)) => Some(Angle::Fixed(a)),
            _ => {
                return Err(QwcError::Circuit(
                    "rotation gate needs exactly one of param_index or angle".into(),
                ));
            }
        };
        Ok(Self {
            kind: r.kind,
            qubits: r.qubits,
            angle,
        })
    }
}

/// Offset added to the angle of a single gate occurrence. Used by the
/// parameter-shift rule when one parameter feeds several gates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GateShift {
    pub gate: usize,
    pub offset: f64,
}

/// Ordered gate list over `n` qubits with `param_count` free parameters.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParamCircuit {
    n: usize,
    gates: Vec<Gate>,
    param_count: usize,
}

impl ParamCircuit {
    /// Builds a circuit, checking qubit ranges and that parameter indices
    /// cover `0..param_count` exactly.
    pub fn new(n: usize, gates: Vec<Gate>, param_count: usize) -> Result<Self> {
        if n == 0 {
            return Err(QwcError::Circuit("circuit needs at least one qubit".into()));
        }
        let mut used = vec![false; param_count];
        for (idx, gate) in gates.iter().enumerate() {
            if let Some(&q) = gate.qubits.iter().find(|&&q| q >= n) {
                return Err(QwcError::Circuit(format!(
                    "gate {idx} acts on qubit {q} >= {n}"
                )));
            }
            if gate.kind == GateKind::Cx && gate.qubits[0] == gate.qubits[1] {
                return Err(QwcError::Circuit(format!(
                    "gate {idx} has control == target"
                )));
            }
            match gate.angle {
                Some(Angle::Param(p)) if p >= param_count => {
                    return Err(QwcError::Circuit(format!(
                        "gate {idx} references parameter {p} >= {param_count}"
                    )));
                }
                Some(Angle::Param(p)) => used[p] = true,
                Some(Angle::Fixed(a)) if !a.is_finite() => {
                    return Err(QwcError::Circuit(format!(
                        "gate {idx} has non-finite angle"
                    )));
                }
                _ => {}
            }
        }
        if let Some(p) = used.iter().position(|u| !u) {
            return Err(QwcError::Circuit(format!("parameter {p} drives no gate")));
        }
        Ok(Self {
            n,
            gates,
            param_count,
        })
    }

    /// Same as [`ParamCircuit::new`] with `param_count` inferred from the
    /// largest parameter index.
    pub fn from_gates(n: usize, gates: Vec<Gate>) -> Result<Self> {
        let param_count = gates
            .iter()
            .filter_map(Gate::param_index)
            .max()
            .map_or(0, |m| m + 1);
        Self::new(n, gates, param_count)
    }

    pub fn empty(n: usize) -> Self {
        Self {
            n,
            gates: Vec::new(),
            param_count: 0,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn param_count(&self) -> usize {
        self.param_count
    }

    /// `self` followed by `other`; parameters of `other` are renumbered to
    /// follow those of `self`.
    pub fn concat(&self, other: &ParamCircuit) -> Result<ParamCircuit> {
        check_dim(self.n, other.n)?;
        let offset = self.param_count;
        let mut gates = self.gates.clone();
        gates.extend(other.gates.iter().cloned().map(|mut g| {
            if let Some(Angle::Param(p)) = g.angle {
                g.angle = Some(Angle::Param(p + offset));
            }
            g
        }));
        ParamCircuit::new(self.n, gates, offset + other.param_count)
    }

    /// Indices of the gates whose angle is parameter `index`.
    pub fn gates_for_param(&self, index: usize) -> impl Iterator<Item = usize> + '_ {
        self.gates
            .iter()
            .enumerate()
            .filter(move |(_, g)| g.param_index() == Some(index))
            .map(|(i, _)| i)
    }

    fn check_params(&self, params: &[f64]) -> Result<()> {
        if params.len() != self.param_count {
            return Err(QwcError::Parameter(format!(
                "expected {} parameters, got {}",
                self.param_count,
                params.len()
            )));
        }
        Ok(())
    }

    /// Runs the circuit on `state` in place, optionally shifting one gate.
    pub fn apply_in_place(
        &self,
        params: &[f64],
        state: &mut StateVector,
        shift: Option<GateShift>,
    ) -> Result<()> {
        self.check_params(params)?;
        check_dim(self.n, state.n)?;
        for (idx, gate) in self.gates.iter().enumerate() {
            let mut angle = gate.resolve_angle(params);
            if let Some(s) = shift.filter(|s| s.gate == idx) {
                angle += s.offset;
            }
            match gate.kind {
                GateKind::Ry => state.apply_ry(gate.qubits[0], angle),
                GateKind::Rz => state.apply_rz(gate.qubits[0], angle),
                GateKind::Cx => state.apply_cx(gate.qubits[0], gate.qubits[1]),
            }
        }
        Ok(())
    }

    /// `U(params)|input>`; the input is left untouched.
    pub fn apply(&self, params: &[f64], input: &StateVector) -> Result<StateVector> {
        let mut out = input.clone();
        self.apply_in_place(params, &mut out, None)?;
        Ok(out)
    }

    pub fn apply_shifted(
        &self,
        params: &[f64],
        input: &StateVector,
        shift: GateShift,
    ) -> Result<StateVector> {
        let mut out = input.clone();
        self.apply_in_place(params, &mut out, Some(shift))?;
        Ok(out)
    }

    /// Full unitary, column `j` being the circuit applied to `|j>`.
    pub fn unitary(&self, params: &[f64]) -> Result<UnitaryMatrix> {
        self.unitary_with(params, None, DEFAULT_MAX_QUBITS)
    }

    pub fn unitary_with(
        &self,
        params: &[f64],
        shift: Option<GateShift>,
        max_qubits: usize,
    ) -> Result<UnitaryMatrix> {
        if self.n > max_qubits {
            return Err(QwcError::Resource {
                qubits: self.n,
                max: max_qubits,
            });
        }
        self.check_params(params)?;
        let dim = 1usize << self.n;
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        for col in 0..dim {
            let mut state = StateVector::basis(self.n, col);
            self.apply_in_place(params, &mut state, shift)?;
            for (row, a) in state.amps.iter().enumerate() {
                data[row * dim + col] = *a;
            }
        }
        Ok(UnitaryMatrix { n: self.n, data })
    }
}

impl<'de> Deserialize<'de> for ParamCircuit {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            n: usize,
            gates: Vec<Gate>,
            param_count: Option<usize>,
        }
        let raw = Raw::deserialize(d)?;
        let built = match raw.param_count {
            Some(p) => ParamCircuit::new(raw.n, raw.gates, p),
            None => ParamCircuit::from_gates(raw.n, raw.gates),
        };
        built.map_err(serde::de::Error::custom)
    }
}

/// `apply_circuit` in free-function form.
pub fn apply_circuit(
    circuit: &ParamCircuit,
    params: &[f64],
    input: &StateVector,
) -> Result<StateVector> {
    circuit.apply(params, input)
}

pub fn circuit_unitary(circuit: &ParamCircuit, params: &[f64]) -> Result<UnitaryMatrix> {
    circuit.unitary(params)
}

/// A circuit bundled with concrete parameter values, as written to JSON:
/// `{n, gates: [{kind, qubits, param_index|angle}], params}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundCircuit {
    pub n: usize,
    pub gates: Vec<Gate>,
    pub params: Vec<f64>,
}

impl BoundCircuit {
    pub fn new(circuit: &ParamCircuit, params: &[f64]) -> Result<Self> {
        circuit.check_params(params)?;
        Ok(Self {
            n: circuit.n,
            gates: circuit.gates.clone(),
            params: params.to_vec(),
        })
    }

    pub fn into_parts(self) -> Result<(ParamCircuit, Vec<f64>)> {
        let circuit = ParamCircuit::new(self.n, self.gates, self.params.len())?;
        Ok((circuit, self.params))
    }
}

/// Dense `2^n x 2^n` matrix, row-major, little-endian basis ordering.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl UnitaryMatrix {
    pub fn identity(n: usize) -> Self {
        let dim = 1usize << n;
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            data[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        Self { n, data }
    }

    /// Wraps a row-major matrix; `dim` must be `2^n`. Unitarity is not checked.
    pub fn from_rows(n: usize, data: Vec<Complex64>) -> Result<Self> {
        let dim = 1usize << n;
        check_dim(dim * dim, data.len())?;
        Ok(Self { n, data })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim() + col]
    }

    /// `Tr(self^dagger * other)`.
    pub fn trace_adjoint_product(&self, other: &UnitaryMatrix) -> Result<Complex64> {
        check_dim(self.n, other.n)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Largest entrywise deviation of `M^dagger M` from the identity.
    pub fn unitarity_error(&self) -> f64 {
        let dim = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..dim {
            for j in 0..dim {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..dim {
                    acc += self.get(k, i).conj() * self.get(k, j);
                }
                let expected = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((acc - expected).norm());
            }
        }
        worst
    }
}

impl fmt::Display for StateVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, a) in self.amps.iter().enumerate() {
            if a.norm_sqr() < 1e-12 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(
                f,
                "({:.4}{:+.4}i)|{:0width$b}>",
                a.re,
                a.im,
                i,
                width = self.n
            )?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn empty_circuit_is_identity() {
        let circ = ParamCircuit::empty(2);
        let out = circ.apply(&[], &StateVector::zero(2)).unwrap();
        assert_eq!(out, StateVector::zero(2));
        assert_eq!(
            ParamCircuit::empty(1).unitary(&[]).unwrap(),
            UnitaryMatrix::identity(1)
        );
    }

    #[test]
    fn rz_zero_preserves_state() {
        let circ = ParamCircuit::from_gates(1, vec![Gate::rz(0, Angle::Param(0))]).unwrap();
        let psi = StateVector::from_amplitudes(vec![c(0.6, 0.0), c(0.0, 0.8)]).unwrap();
        let out = circ.apply(&[0.0], &psi).unwrap();
        assert!((fidelity_pure(&psi, &out).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ry_pi_flips_zero_to_one() {
        let circ = ParamCircuit::from_gates(1, vec![Gate::ry(0, Angle::Fixed(PI))]).unwrap();
        let out = circ.apply(&[], &StateVector::zero(1)).unwrap();
        assert!((out.amplitudes()[1] - c(1.0, 0.0)).norm() < 1e-12);
        assert!(out.amplitudes()[0].norm() < 1e-12);
    }

    #[test]
    fn cx_swaps_indices_one_and_three() {
        let circ = ParamCircuit::from_gates(2, vec![Gate::cx(0, 1)]).unwrap();
        let u = circ.unitary(&[]).unwrap();
        let perm = [0usize, 3, 2, 1];
        for (col, &row) in perm.iter().enumerate() {
            for r in 0..4 {
                let expected = if r == row { 1.0 } else { 0.0 };
                assert_eq!(u.get(r, col), c(expected, 0.0));
            }
        }
    }

    #[test]
    fn rz_unitary_is_diagonal_phase() {
        let theta = 0.73;
        let circ = ParamCircuit::from_gates(1, vec![Gate::rz(0, Angle::Param(0))]).unwrap();
        let u = circ.unitary(&[theta]).unwrap();
        assert!((u.get(0, 0) - Complex64::from_polar(1.0, -theta / 2.0)).norm() < 1e-12);
        assert!((u.get(1, 1) - Complex64::from_polar(1.0, theta / 2.0)).norm() < 1e-12);
        assert!(u.get(0, 1).norm() < 1e-15 && u.get(1, 0).norm() < 1e-15);
    }

    #[test]
    fn fidelity_examples() {
        let zero = StateVector::zero(1);
        let one = StateVector::basis(1, 1);
        let plus = StateVector::from_amplitudes(vec![c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!((fidelity_pure(&zero, &zero).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(fidelity_pure(&zero, &one).unwrap(), 0.0);
        assert!((fidelity_pure(&zero, &plus).unwrap() - 0.5).abs() < 1e-15);
        assert!(fidelity_pure(&zero, &StateVector::zero(2)).is_err());
    }

    #[test]
    fn parameter_errors() {
        let circ = ParamCircuit::from_gates(1, vec![Gate::ry(0, Angle::Param(0))]).unwrap();
        assert!(matches!(
            circ.apply(&[], &StateVector::zero(1)),
            Err(QwcError::Parameter(_))
        ));
        assert!(matches!(
            circ.apply(&[0.1], &StateVector::zero(2)),
            Err(QwcError::DimensionMismatch { .. })
        ));
        let big = ParamCircuit::empty(11);
        assert!(matches!(big.unitary(&[]), Err(QwcError::Resource { .. })));
    }

    #[test]
    fn circuit_validation() {
        assert!(ParamCircuit::new(2, vec![Gate::cx(0, 2)], 0).is_err());
        assert!(ParamCircuit::new(2, vec![Gate::cx(1, 1)], 0).is_err());
        assert!(ParamCircuit::new(1, vec![Gate::ry(0, Angle::Param(1))], 1).is_err());
        // parameter 0 unused
        assert!(ParamCircuit::new(1, vec![Gate::ry(0, Angle::Param(1))], 2).is_err());
    }

    #[test]
    fn product_state_ordering() {
        let zero = [c(1.0, 0.0), c(0.0, 0.0)];
        let one = [c(0.0, 0.0), c(1.0, 0.0)];
        // qubit 0 = |1>, qubit 1 = |0> -> index 1
        assert_eq!(StateVector::product(&[one, zero]), StateVector::basis(2, 1));
    }

    #[test]
    fn circuit_json_shape() {
        let circ = ParamCircuit::from_gates(
            2,
            vec![
                Gate::ry(0, Angle::Param(0)),
                Gate::rz(1, Angle::Fixed(0.5)),
                Gate::cx(0, 1),
            ],
        )
        .unwrap();
        let bound = BoundCircuit::new(&circ, &[0.25]).unwrap();
        let json = serde_json::to_value(&bound).unwrap();
        assert_eq!(
            json,
            serde_json::json!({
                "n": 2,
                "gates": [
                    {"kind": "ry", "qubits": [0], "param_index": 0},
                    {"kind": "rz", "qubits": [1], "angle": 0.5},
                    {"kind": "cx", "qubits": [0, 1]}
                ],
                "params": [0.25]
            })
        );
        let back: BoundCircuit = serde_json::from_value(json).unwrap();
        let (c2, p2) = back.into_parts().unwrap();
        assert_eq!(c2, circ);
        assert_eq!(p2, vec![0.25]);
    }
}
