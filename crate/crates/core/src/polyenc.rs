//! The polyqubit encoding of `p` qubits in `2^p` atomic levels.
//!
//! Atomic level `k` written in `p`-digit binary is the concatenation of the
//! qubit values, first label most significant. The levels are the vertices of
//! a `p`-cube; the edges parallel to one axis are the atomic transitions whose
//! two-level Pauli operators sum to that qubit's Pauli operator.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linop::{OperatorMatrix, StateVector, C64, I, ONE, ZERO};

pub const MAX_QUBITS_PER_ATOM: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PauliAxis {
    X,
    Y,
    Z,
}

impl PauliAxis {
    pub const ALL: [PauliAxis; 3] = [PauliAxis::X, PauliAxis::Y, PauliAxis::Z];
}

/// Qubit names, tied to the binary digit they own.
///
/// `V` is the least significant digit, then `H`, then `D` ("depth"). A fourth
/// qubit is called `W`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum QubitLabel {
    V,
    H,
    D,
    W,
}

impl QubitLabel {
    const BY_BIT: [QubitLabel; MAX_QUBITS_PER_ATOM] =
        [QubitLabel::V, QubitLabel::H, QubitLabel::D, QubitLabel::W];

    /// Binary digit owned by this qubit (0 = least significant).
    pub fn bit(self) -> usize {
        match self {
            QubitLabel::V => 0,
            QubitLabel::H => 1,
            QubitLabel::D => 2,
            QubitLabel::W => 3,
        }
    }

    pub fn from_bit(bit: usize) -> Option<Self> {
        Self::BY_BIT.get(bit).copied()
    }
}

impl fmt::Display for QubitLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            QubitLabel::V => "V",
            QubitLabel::H => "H",
            QubitLabel::D => "D",
            QubitLabel::W => "W",
        };
        f.write_str(s)
    }
}

impl FromStr for QubitLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "V" | "v" => Ok(QubitLabel::V),
            "H" | "h" => Ok(QubitLabel::H),
            "D" | "d" => Ok(QubitLabel::D),
            "W" | "w" => Ok(QubitLabel::W),
            other => Err(Error::domain(format!("unknown qubit label {other:?}"))),
        }
    }
}

/// An atomic transition between two levels.
pub type Transition = (usize, usize);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyEncoding {
    p: usize,
    labels: Vec<QubitLabel>,
    /// Aligned with `labels`.
    edges: Vec<Vec<Transition>>,
}

impl PolyEncoding {
    pub fn new(p: usize) -> Result<Self> {
        let edges = hypercube_edges(p)?;
        Ok(Self {
            p,
            labels: edges.iter().map(|(label, _)| *label).collect(),
            edges: edges.into_iter().map(|(_, e)| e).collect(),
        })
    }

    pub fn qubits(&self) -> usize {
        self.p
    }

    pub fn level_count(&self) -> usize {
        1 << self.p
    }

    /// Labels ordered from most to least significant digit.
    pub fn labels(&self) -> &[QubitLabel] {
        &self.labels
    }

    pub fn contains(&self, label: QubitLabel) -> bool {
        label.bit() < self.p
    }

    fn check_label(&self, label: QubitLabel) -> Result<()> {
        if self.contains(label) {
            Ok(())
        } else {
            Err(Error::domain(format!(
                "qubit {label} is not part of a p = {} encoding",
                self.p
            )))
        }
    }

    /// Position of `label` among the per-qubit tensor factors of one atom.
    pub fn slot(&self, label: QubitLabel) -> Result<usize> {
        self.check_label(label)?;
        Ok(self.p - 1 - label.bit())
    }

    /// The transitions that make up `label`'s Pauli operators.
    pub fn edges(&self, label: QubitLabel) -> Result<&[Transition]> {
        let slot = self.slot(label)?;
        Ok(&self.edges[slot])
    }

    pub fn all_edges(&self) -> impl Iterator<Item = (QubitLabel, Transition)> + '_ {
        self.labels
            .iter()
            .zip(&self.edges)
            .flat_map(|(label, edges)| edges.iter().map(move |e| (*label, *e)))
    }

    /// Value of qubit `label` in atomic level `level`.
    pub fn qubit_value(&self, level: usize, label: QubitLabel) -> Result<u8> {
        self.check_label(label)?;
        self.check_level(level)?;
        Ok(((level >> label.bit()) & 1) as u8)
    }

    /// Qubit values of `level`, ordered like `labels()`.
    pub fn bits_of(&self, level: usize) -> Result<Vec<u8>> {
        self.check_level(level)?;
        Ok(self
            .labels
            .iter()
            .map(|l| ((level >> l.bit()) & 1) as u8)
            .collect())
    }

    pub fn level_of(&self, bits: &[u8]) -> Result<usize> {
        if bits.len() != self.p {
            return Err(Error::domain(format!(
                "expected {} qubit values, got {}",
                self.p,
                bits.len()
            )));
        }
        bits.iter().try_fold(0usize, |acc, &b| match b {
            0 | 1 => Ok((acc << 1) | b as usize),
            other => Err(Error::domain(format!("qubit value {other} is not a bit"))),
        })
    }

    fn check_level(&self, level: usize) -> Result<()> {
        if level < self.level_count() {
            Ok(())
        } else {
            Err(Error::domain(format!(
                "level {level} out of range for {} levels",
                self.level_count()
            )))
        }
    }

    /// Level permutation that exchanges the digits of two qubits.
    pub fn relabeling(&self, a: QubitLabel, b: QubitLabel) -> Result<Vec<usize>> {
        self.check_label(a)?;
        self.check_label(b)?;
        let (ba, bb) = (a.bit(), b.bit());
        Ok((0..self.level_count())
            .map(|k| {
                let (da, db) = ((k >> ba) & 1, (k >> bb) & 1);
                (k & !(1 << ba) & !(1 << bb)) | (db << ba) | (da << bb)
            })
            .collect())
    }

    /// Level permutation sending the digit of each `from[i]` to the digit of `to[i]`.
    ///
    /// `from` and `to` must each list every label of the encoding exactly once.
    pub fn label_permutation(&self, from: &[QubitLabel], to: &[QubitLabel]) -> Result<Vec<usize>> {
        let mut sorted_from: Vec<_> = from.to_vec();
        let mut sorted_to: Vec<_> = to.to_vec();
        sorted_from.sort();
        sorted_to.sort();
        let mut all = self.labels.clone();
        all.sort();
        if sorted_from != all || sorted_to != all {
            return Err(Error::domain("label permutation must list every qubit exactly once"));
        }
        Ok((0..self.level_count())
            .map(|k| {
                from.iter().zip(to).fold(0, |acc, (f, t)| {
                    acc | (((k >> f.bit()) & 1) << t.bit())
                })
            })
            .collect())
    }
}

/// Edges of the `p`-cube grouped by direction, most significant direction first.
pub fn hypercube_edges(p: usize) -> Result<Vec<(QubitLabel, Vec<Transition>)>> {
    if !(1..=MAX_QUBITS_PER_ATOM).contains(&p) {
        return Err(Error::domain(format!(
            "qubits per atom must be in 1..={MAX_QUBITS_PER_ATOM}, got {p}"
        )));
    }
    let levels = 1usize << p;
    Ok((0..p)
        .rev()
        .map(|bit| {
            let label = QubitLabel::from_bit(bit).expect("bit < MAX_QUBITS_PER_ATOM");
            let edges = (0..levels)
                .filter(|m| m & (1 << bit) == 0)
                .map(|m| (m, m | (1 << bit)))
                .collect();
            (label, edges)
        })
        .collect())
}

fn check_pair(enc: &PolyEncoding, m: usize, n: usize) -> Result<()> {
    enc.check_level(m)?;
    enc.check_level(n)?;
    if m == n {
        return Err(Error::domain(format!("atomic Pauli needs two distinct levels, got {m} twice")));
    }
    Ok(())
}

/// s^(axis)_{mn} = T†_{mn} σ^(axis) T_{mn} with T_{mn} = |↑⟩⟨m| + |↓⟩⟨n|.
pub fn atomic_pauli(enc: &PolyEncoding, axis: PauliAxis, m: usize, n: usize) -> Result<OperatorMatrix> {
    check_pair(enc, m, n)?;
    let (mm, mn, nm, nn) = match axis {
        PauliAxis::X => (ZERO, ONE, ONE, ZERO),
        PauliAxis::Y => (ZERO, -I, I, ZERO),
        PauliAxis::Z => (ONE, ZERO, ZERO, -ONE),
    };
    Ok(two_level_operator(enc.level_count(), m, n, [mm, mn, nm, nn]))
}

/// s^(+)_{mn} = T†_{mn} σ^(+) T_{mn} = |m⟩⟨n|.
pub fn atomic_raising(enc: &PolyEncoding, m: usize, n: usize) -> Result<OperatorMatrix> {
    check_pair(enc, m, n)?;
    Ok(two_level_operator(enc.level_count(), m, n, [ZERO, ONE, ZERO, ZERO]))
}

fn two_level_operator(dim: usize, m: usize, n: usize, [mm, mn, nm, nn]: [C64; 4]) -> OperatorMatrix {
    OperatorMatrix::from_fn(dim, |i, j| match (i, j) {
        (i, j) if i == m && j == m => mm,
        (i, j) if i == m && j == n => mn,
        (i, j) if i == n && j == m => nm,
        (i, j) if i == n && j == n => nn,
        _ => ZERO,
    })
}

/// Qubit Pauli operator as the sum of atomic Paulis over the qubit's edges.
pub fn qubit_pauli(enc: &PolyEncoding, axis: PauliAxis, label: QubitLabel) -> Result<OperatorMatrix> {
    let mut sum = OperatorMatrix::zeros(enc.level_count());
    for &(m, n) in enc.edges(label)? {
        sum = &sum + &atomic_pauli(enc, axis, m, n)?;
    }
    sum.with_factor_dims(vec![2; enc.qubits()])
}

/// Atomic basis ket for the given qubit values (ordered like `enc.labels()`).
pub fn encode_state(enc: &PolyEncoding, qubit_values: &[u8]) -> Result<StateVector> {
    let level = enc.level_of(qubit_values)?;
    StateVector::basis(level, vec![2; enc.qubits()])
}
