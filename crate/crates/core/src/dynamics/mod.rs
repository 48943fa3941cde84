//! Inter-atomic gates between two polyencoded ions sharing one phonon mode.
//!
//! The joint Hilbert space is ion 0 ⊗ ion 1 ⊗ mode. Each ion contributes `p`
//! qubit factors (first label outermost) and the mode contributes `N + 1` Fock
//! levels, so a full-space index is `(level0 · 2^p + level1) · (N + 1) + n`.
//!
//! Both gate Hamiltonians are interaction-picture, Lamb-Dicke and RWA forms:
//! they can be written `H(t) = e^{iδt} M ⊗ â + e^{−iδt} M† ⊗ â†` for an atomic
//! drive operator `M` collected from the tones.

mod hamiltonian;
mod integrate;
mod oracle;
mod phase_space;

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linop::{kron, OperatorMatrix, StateVector, C64, ZERO};
use crate::polyenc::{PolyEncoding, QubitLabel, Transition};
use crate::tolerances;

pub use hamiltonian::{hamiltonian_xx, hamiltonian_zz, DriveOperator};
pub use integrate::{evolve, Trajectory, TrajectorySample};
pub use oracle::{
    effective_evolution, effective_hamiltonian, monoqubit_ms_oracle, MonoqubitDrive,
};
pub use phase_space::{
    analytic_branch_alpha, phase_space_trajectory, PhaseSpaceBranch, PhaseSpacePoint,
    PhaseSpaceResult,
};

pub const MIN_FOCK_CUTOFF: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DriveKind {
    /// Bichromatic red/blue sideband drive (Mølmer–Sørensen).
    Xx,
    /// State-dependent AC Stark force with a beatnote near the mode frequency.
    Zz,
}

/// One laser interaction on one atomic transition of one ion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriveTone {
    pub ion: usize,
    pub transition: Transition,
    /// η·Ω for the transition, an angular frequency.
    pub strength: f64,
    /// Δφ for XX tones, beatnote phase φ for ZZ tones; kept in [0, 2π).
    pub phase: f64,
    pub kind: DriveKind,
}

impl DriveTone {
    pub fn new(ion: usize, transition: Transition, strength: f64, phase: f64, kind: DriveKind) -> Result<Self> {
        if ion > 1 {
            return Err(Error::domain(format!("ion index must be 0 or 1, got {ion}")));
        }
        if !(strength >= 0.0 && strength.is_finite()) {
            return Err(Error::domain(format!("tone strength must be finite and >= 0, got {strength}")));
        }
        if !phase.is_finite() {
            return Err(Error::domain("tone phase must be finite"));
        }
        Ok(Self {
            ion,
            transition,
            strength,
            phase: phase.rem_euclid(TAU),
            kind,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BosonicMode {
    /// Highest retained Fock level N; the mode space has N + 1 levels.
    pub fock_cutoff: usize,
    /// Detuning δ from the motional sideband (or mode frequency for ZZ).
    pub detuning: f64,
}

impl BosonicMode {
    pub fn new(fock_cutoff: usize, detuning: f64) -> Result<Self> {
        if fock_cutoff < MIN_FOCK_CUTOFF {
            return Err(Error::domain(format!(
                "Fock cutoff must be at least {MIN_FOCK_CUTOFF}, got {fock_cutoff}"
            )));
        }
        if !detuning.is_finite() {
            return Err(Error::domain("detuning must be finite"));
        }
        Ok(Self {
            fock_cutoff,
            detuning,
        })
    }

    pub fn levels(&self) -> usize {
        self.fock_cutoff + 1
    }
}

/// Everything `evolve` needs for one run.
#[derive(Debug, Clone)]
pub struct SimConfig {
    pub qubits_per_atom: usize,
    pub tones: Vec<DriveTone>,
    pub mode: BosonicMode,
    pub duration: f64,
    pub dt: f64,
    pub initial_state: StateVector,
    /// Steps between recorded samples; the final state is always recorded.
    pub sample_stride: usize,
    pub rng_seed: u64,
}

impl SimConfig {
    pub fn encoding(&self) -> Result<PolyEncoding> {
        PolyEncoding::new(self.qubits_per_atom)
    }

    pub fn validate(&self) -> Result<PolyEncoding> {
        let enc = self.encoding()?;
        if !(self.duration > 0.0 && self.duration.is_finite()) {
            return Err(Error::domain(format!("duration must be positive, got {}", self.duration)));
        }
        if !(self.dt > 0.0) {
            return Err(Error::domain(format!("dt must be positive, got {}", self.dt)));
        }
        if self.dt > self.duration / 100.0 * (1.0 + 1e-12) {
            return Err(Error::domain(format!(
                "dt = {} exceeds duration / 100 = {}",
                self.dt,
                self.duration / 100.0
            )));
        }
        if self.sample_stride == 0 {
            return Err(Error::domain("sample stride must be at least 1"));
        }
        BosonicMode::new(self.mode.fock_cutoff, self.mode.detuning)?;
        let dims = joint_factor_dims(&enc, &self.mode);
        if self.initial_state.factor_dims() != dims.as_slice() {
            return Err(Error::structural(format!(
                "initial state factors {:?} do not match ion ⊗ ion ⊗ mode layout {dims:?}",
                self.initial_state.factor_dims()
            )));
        }
        let norm_err = (self.initial_state.norm() - 1.0).abs();
        if norm_err > tolerances::STATE_NORM * 100.0 {
            return Err(Error::domain(format!("initial state norm deviates from 1 by {norm_err:.3e}")));
        }
        validate_tones(&enc, &self.tones)?;
        Ok(enc)
    }
}

/// Factor layout of the joint space: p qubits, p qubits, Fock levels.
pub fn joint_factor_dims(enc: &PolyEncoding, mode: &BosonicMode) -> Vec<usize> {
    let mut dims = vec![2; 2 * enc.qubits()];
    dims.push(mode.levels());
    dims
}

/// Index of a participant qubit's factor within the joint layout.
pub fn joint_slot(enc: &PolyEncoding, ion: usize, label: QubitLabel) -> Result<usize> {
    Ok(ion * enc.qubits() + enc.slot(label)?)
}

/// Product state |ion0⟩ ⊗ |ion1⟩ ⊗ |n = 0⟩.
pub fn joint_state(ion0: &StateVector, ion1: &StateVector, mode: &BosonicMode) -> Result<StateVector> {
    let vacuum = StateVector::basis(0, vec![mode.levels()])?;
    StateVector::tensor_all(&[ion0, ion1, &vacuum])
}

pub(crate) fn validate_tones(enc: &PolyEncoding, tones: &[DriveTone]) -> Result<()> {
    let levels = enc.level_count();
    for tone in tones {
        if tone.ion > 1 {
            return Err(Error::domain(format!("tone on ion {}", tone.ion)));
        }
        let (m, n) = tone.transition;
        if m >= levels || n >= levels || m == n {
            return Err(Error::domain(format!(
                "transition ({m}, {n}) invalid for {levels} levels"
            )));
        }
    }
    for (i, a) in tones.iter().enumerate() {
        for b in &tones[i + 1..] {
            let (am, an) = a.transition;
            let (bm, bn) = b.transition;
            if a.ion == b.ion && [am, an].iter().any(|l| *l == bm || *l == bn) {
                return Err(Error::domain(format!(
                    "transitions ({am}, {an}) and ({bm}, {bn}) overlap on ion {}",
                    a.ion
                )));
            }
        }
    }
    Ok(())
}

pub(crate) fn check_kind(tones: &[DriveTone], kind: DriveKind) -> Result<()> {
    match tones.iter().find(|t| t.kind != kind) {
        Some(t) => Err(Error::domain(format!("expected {kind:?} tones, found {:?}", t.kind))),
        None => Ok(()),
    }
}

/// Embeds a single-atom operator on `ion` of the two-ion atomic space.
pub fn embed_on_ion(enc: &PolyEncoding, op: &OperatorMatrix, ion: usize) -> Result<OperatorMatrix> {
    let one = OperatorMatrix::identity(enc.level_count()).with_factor_dims(vec![2; enc.qubits()])?;
    let op = op.clone().with_factor_dims(vec![2; enc.qubits()])?;
    match ion {
        0 => kron(&op, &one),
        1 => kron(&one, &op),
        other => Err(Error::domain(format!("ion index must be 0 or 1, got {other}"))),
    }
}

/// Truncated annihilation operator on Fock levels 0..=cutoff.
pub fn annihilation(cutoff: usize) -> OperatorMatrix {
    OperatorMatrix::from_fn(cutoff + 1, |i, j| {
        if j == i + 1 {
            C64::new((j as f64).sqrt(), 0.0)
        } else {
            ZERO
        }
    })
}

/// Populations of the participant computational states |00⟩, |01⟩, |10⟩, |11⟩
/// (ion 0 digit first), summed over spectators and phonons.
pub fn participant_populations(
    enc: &PolyEncoding,
    participants: [QubitLabel; 2],
    mode_levels: usize,
    psi: &[C64],
) -> [f64; 4] {
    let levels = enc.level_count();
    let mut pops = [0.0; 4];
    for (idx, amp) in psi.iter().enumerate() {
        let atom = idx / mode_levels;
        let (l0, l1) = (atom / levels, atom % levels);
        let b0 = (l0 >> participants[0].bit()) & 1;
        let b1 = (l1 >> participants[1].bit()) & 1;
        pops[2 * b0 + b1] += amp.norm_sqr();
    }
    pops
}

/// Matched tones driving `label` on `ion`: one tone per edge of that qubit.
pub fn matched_tones(
    enc: &PolyEncoding,
    ion: usize,
    label: QubitLabel,
    strength: f64,
    phase: f64,
    kind: DriveKind,
) -> Result<Vec<DriveTone>> {
    enc.edges(label)?
        .iter()
        .map(|&edge| DriveTone::new(ion, edge, strength, phase, kind))
        .collect()
}
