//! k-local Pauli observables and their expectation values on pure states.
//!
//! Strings are written with qubit 0 leftmost, so `"XIZ"` is `X` on qubit 0
//! and `Z` on qubit 2.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, QwcError, Result};
use crate::simulator::StateVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const NON_IDENTITY: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];

    pub fn to_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }
}

/// Tensor product of single-qubit Paulis.
///
/// Besides the letters, the string keeps bit masks so that applying it to a
/// basis state is `P|j> = i^{#Y} (-1)^{popcount(j & z_mask)} |j ^ x_mask>`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    letters: Vec<Pauli>,
    support: Vec<usize>,
    x_mask: usize,
    z_mask: usize,
    y_count: usize,
}

impl PauliString {
    pub fn new(letters: Vec<Pauli>) -> Self {
        let mut support = Vec::new();
        let (mut x_mask, mut z_mask, mut y_count) = (0usize, 0usize, 0usize);
        for (q, &p) in letters.iter().enumerate() {
            let bit = 1usize << q;
            match p {
                Pauli::I => continue,
                Pauli::X => x_mask |= bit,
                Pauli::Y => {
                    x_mask |= bit;
                    z_mask |= bit;
                    y_count += 1;
                }
                Pauli::Z => z_mask |= bit,
            }
            support.push(q);
        }
        Self {
            letters,
            support,
            x_mask,
            z_mask,
            y_count,
        }
    }

    /// Identity on `n` qubits except `letter` on `qubit`.
    pub fn single(n: usize, qubit: usize, letter: Pauli) -> Self {
        let mut letters = vec![Pauli::I; n];
        letters[qubit] = letter;
        Self::new(letters)
    }

    pub fn n(&self) -> usize {
        self.letters.len()
    }

    pub fn letters(&self) -> &[Pauli] {
        &self.letters
    }

    /// Sorted qubits on which the string acts non-trivially.
    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn locality(&self) -> usize {
        self.support.len()
    }

    /// `<state|P|state>`.
    pub fn expectation(&self, state: &StateVector) -> Result<f64> {
        check_dim(self.n(), state.n())?;
        let amps = state.amplitudes();
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, a) in amps.iter().enumerate() {
            if a.re == 0.0 && a.im == 0.0 {
                continue;
            }
            let flipped = amps[j ^ self.x_mask];
            let term = flipped.conj() * a;
            if (j & self.z_mask).count_ones().is_multiple_of(2) {
                acc += term;
            } else {
                acc -= term;
            }
        }
        // i^{#Y}; the result is real for a Hermitian string.
        let value = match self.y_count % 4 {
            0 => acc.re,
            1 => -acc.im,
            2 => -acc.re,
            _ => acc.im,
        };
        Ok(value)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.letters {
            write!(f, "{}", p.to_char())?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = QwcError;

    fn from_str(s: &str) -> Result<Self> {
        let letters = s
            .chars()
            .map(|c| {
                Pauli::from_char(c)
                    .ok_or_else(|| QwcError::InvalidArgument(format!("bad Pauli letter {c:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if letters.is_empty() {
            return Err(QwcError::InvalidArgument("empty Pauli string".into()));
        }
        Ok(Self::new(letters))
    }
}

impl Serialize for PauliString {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PauliString {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// All Pauli strings on `n` qubits with locality `1..=k`, in canonical order.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservableSet {
    n: usize,
    k: usize,
    strings: Vec<PauliString>,
}

impl ObservableSet {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn strings(&self) -> &[PauliString] {
        &self.strings
    }

    pub fn len(&self) -> usize {
        self.strings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strings.is_empty()
    }

    /// Exact expectation of every string, in set order.
    pub fn expectations(&self, state: &StateVector) -> Result<Vec<f64>> {
        check_dim(self.n, state.n())?;
        self.strings.iter().map(|p| p.expectation(state)).collect()
    }
}

/// `sum_{j=1..k} C(n, j) 3^j`.
pub fn count_k_local(n: usize, k: usize) -> usize {
    let mut total = 0usize;
    let mut binom = 1usize;
    let mut pow3 = 1usize;
    for j in 1..=k.min(n) {
        binom = binom * (n - j + 1) / j;
        pow3 *= 3;
        total += binom * pow3;
    }
    total
}

/// Enumerates every k-local string, ordered by locality, then by support
/// (lexicographic), then by letters with `X < Y < Z`.
pub fn enumerate_k_local(n: usize, k: usize) -> Result<ObservableSet> {
    if n == 0 || k == 0 || k > n {
        return Err(QwcError::InvalidArgument(format!(
            "locality k={k} must satisfy 1 <= k <= n={n}"
        )));
    }
    let mut strings = Vec::with_capacity(count_k_local(n, k));
    for locality in 1..=k {
        let mut support: Vec<usize> = (0..locality).collect();
        loop {
            push_letter_words(n, &support, &mut strings);
            if !next_combination(&mut support, n) {
                break;
            }
        }
    }
    Ok(ObservableSet { n, k, strings })
}

fn push_letter_words(n: usize, support: &[usize], out: &mut Vec<PauliString>) {
    let words = 3usize.pow(support.len() as u32);
    for w in 0..words {
        let mut letters = vec![Pauli::I; n];
        let mut rest = w;
        // first support qubit is the most significant digit
        for &q in support.iter().rev() {
            letters[q] = Pauli::NON_IDENTITY[rest % 3];
            rest /= 3;
        }
        out.push(PauliString::new(letters));
    }
}

fn next_combination(comb: &mut [usize], n: usize) -> bool {
    let k = comb.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if comb[i] < n - k + i {
            comb[i] += 1;
            for j in i + 1..k {
                comb[j] = comb[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

pub fn pauli_expectation(state: &StateVector, p: &PauliString) -> Result<f64> {
    p.expectation(state)
}

/// Finite-shot estimate `(n_plus - n_minus) / shots`, where each shot is
/// `+1` with probability `(1 + <P>) / 2`.
pub fn pauli_expectation_shots<R: Rng + ?Sized>(
    state: &StateVector,
    p: &PauliString,
    shots: u64,
    rng: &mut R,
) -> Result<f64> {
    if shots == 0 {
        return Err(QwcError::InvalidArgument("shots must be >= 1".into()));
    }
    let exact = p.expectation(state)?;
    let p_plus = ((1.0 + exact) / 2.0).clamp(0.0, 1.0);
    let plus = Binomial::new(shots, p_plus)
        .map_err(|e| QwcError::InvalidArgument(e.to_string()))?
        .sample(rng);
    Ok((2.0 * plus as f64 - shots as f64) / shots as f64)
}

/// How expectation values are obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "mode")]
pub enum Estimator {
    #[default]
    Exact,
    Shots {
        shots: u64,
    },
}

impl Estimator {
    pub fn expectation<R: Rng + ?Sized>(
        &self,
        state: &StateVector,
        p: &PauliString,
        rng: &mut R,
    ) -> Result<f64> {
        match *self {
            Estimator::Exact => p.expectation(state),
            Estimator::Shots { shots } => pauli_expectation_shots(state, p, shots, rng),
        }
    }

    pub fn expectations<R: Rng + ?Sized>(
        &self,
        state: &StateVector,
        obs: &ObservableSet,
        rng: &mut R,
    ) -> Result<Vec<f64>> {
        match self {
            Estimator::Exact => obs.expectations(state),
            Estimator::Shots { .. } => obs
                .strings
                .iter()
                .map(|p| self.expectation(state, p, rng))
                .collect(),
        }
    }
}
