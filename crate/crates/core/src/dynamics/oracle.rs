//! Independent references for the polyqubit gate dynamics.

use crate::error::{Error, Result};
use crate::linop::{expm, kron, sigma_x, OperatorMatrix, StateVector, C64, ZERO};
use crate::polyenc::{atomic_pauli, PauliAxis, PolyEncoding, QubitLabel};

use super::integrate::{integrate, Trajectory};
use super::{annihilation, embed_on_ion, BosonicMode, DriveKind};

/// Parameters of the two-level-per-ion Mølmer–Sørensen reference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonoqubitDrive {
    pub g1: f64,
    pub g2: f64,
    pub mode: BosonicMode,
    pub duration: f64,
    pub dt: f64,
    pub sample_stride: usize,
}

/// Integrates Σ_α (g_α/2) σ^(X,α) (â e^{iδt} + â† e^{−iδt}) for two ordinary
/// qubits and one mode, with the same stepper as `evolve`.
///
/// `initial` is a two-qubit ket (dim 4); the mode starts in its ground state.
/// The joint layout is qubit ⊗ qubit ⊗ mode.
pub fn monoqubit_ms_oracle(drive: &MonoqubitDrive, initial: &StateVector) -> Result<Trajectory> {
    if initial.dim() != 4 {
        return Err(Error::structural(format!(
            "monoqubit reference needs a two-qubit state, got dim {}",
            initial.dim()
        )));
    }
    if !(drive.duration > 0.0 && drive.dt > 0.0 && drive.dt <= drive.duration / 100.0 * (1.0 + 1e-12)) {
        return Err(Error::domain("monoqubit reference needs duration > 0 and 0 < dt <= duration / 100"));
    }
    let mode = BosonicMode::new(drive.mode.fock_cutoff, drive.mode.detuning)?;
    let one = OperatorMatrix::identity(2);
    let spins = &kron(&sigma_x(), &one)?.scale(C64::new(drive.g1 / 2.0, 0.0))
        + &kron(&one, &sigma_x())?.scale(C64::new(drive.g2 / 2.0, 0.0));
    let a = annihilation(mode.fock_cutoff);
    let lower = kron(&spins, &a)?;
    let raise = kron(&spins, &a.adjoint())?;

    let spin_state = StateVector::new(initial.amplitudes().to_vec(), vec![2, 2])?;
    let vacuum = StateVector::basis(0, vec![mode.levels()])?;
    let psi0 = spin_state.tensor(&vacuum)?;

    let dim = psi0.dim();
    let (lm, rm) = (lower.matrix(), raise.matrix());
    integrate(
        |t, psi, out| {
            let up = C64::from_polar(1.0, mode.detuning * t);
            let down = up.conj();
            for (i, o) in out.iter_mut().enumerate() {
                let mut acc = ZERO;
                for j in 0..dim {
                    acc += (up * lm[(i, j)] + down * rm[(i, j)]) * psi[j];
                }
                *o = acc;
            }
        },
        &psi0,
        drive.duration,
        drive.dt,
        drive.sample_stride,
    )
}

/// Adiabatically eliminated two-ion Hamiltonian (g1 g2 / 2δ) σ^(a)_{d1} σ^(a)_{d2},
/// assembled from the cross terms of the atomic Paulis on each qubit's edges.
/// `a` is X for the XX gate and Z for the ZZ gate.
pub fn effective_hamiltonian(
    enc: &PolyEncoding,
    kind: DriveKind,
    participants: [QubitLabel; 2],
    g1: f64,
    g2: f64,
    detuning: f64,
) -> Result<OperatorMatrix> {
    if detuning == 0.0 || !detuning.is_finite() {
        return Err(Error::domain("effective Hamiltonian needs a finite non-zero detuning"));
    }
    let axis = match kind {
        DriveKind::Xx => PauliAxis::X,
        DriveKind::Zz => PauliAxis::Z,
    };
    let rate = g1 * g2 / (2.0 * detuning);
    let atoms = enc.level_count() * enc.level_count();
    let mut h = OperatorMatrix::zeros(atoms);
    for &(m1, n1) in enc.edges(participants[0])? {
        let s1 = embed_on_ion(enc, &atomic_pauli(enc, axis, m1, n1)?, 0)?;
        for &(m2, n2) in enc.edges(participants[1])? {
            let s2 = embed_on_ion(enc, &atomic_pauli(enc, axis, m2, n2)?, 1)?;
            h = &h + &(&s1 * &s2);
        }
    }
    h.scale(C64::new(rate, 0.0))
        .with_factor_dims(vec![2; 2 * enc.qubits()])
}

/// exp(−i H t)|ψ⟩ at each requested time.
pub fn effective_evolution(h: &OperatorMatrix, initial: &StateVector, times: &[f64]) -> Result<Vec<StateVector>> {
    times
        .iter()
        .map(|&t| expm(h, t)?.apply(initial))
        .collect()
}
