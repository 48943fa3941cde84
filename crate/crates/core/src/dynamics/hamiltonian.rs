use crate::error::{Error, Result};
use crate::linop::{kron, OperatorMatrix, C64, ZERO};
use crate::polyenc::{atomic_pauli, atomic_raising, PauliAxis, PolyEncoding};

use super::{annihilation, check_kind, embed_on_ion, validate_tones, BosonicMode, DriveKind, DriveTone};

/// Dense XX (Mølmer–Sørensen) Hamiltonian at time `t`, assembled term by term:
/// Σ (g/2) s⁺_{mn} (â e^{iδt} + â† e^{−iδt}) e^{iΔφ} + H.c.
pub fn hamiltonian_xx(enc: &PolyEncoding, tones: &[DriveTone], mode: &BosonicMode, t: f64) -> Result<OperatorMatrix> {
    check_kind(tones, DriveKind::Xx)?;
    validate_tones(enc, tones)?;
    let a = annihilation(mode.fock_cutoff);
    let motion = &a.scale(C64::from_polar(1.0, mode.detuning * t))
        + &a.adjoint().scale(C64::from_polar(1.0, -mode.detuning * t));
    let mut half = zero_joint(enc, mode)?;
    for tone in tones {
        let (m, n) = tone.transition;
        let raise = embed_on_ion(enc, &atomic_raising(enc, m, n)?, tone.ion)?;
        let coeff = C64::from_polar(tone.strength / 2.0, tone.phase);
        half = &half + &kron(&raise, &motion)?.scale(coeff);
    }
    Ok(&half + &half.adjoint())
}

/// Dense ZZ light-shift Hamiltonian at time `t`:
/// Σ (g/2) s^Z_{mn} (â e^{i(δt+φ)} + â† e^{−i(δt+φ)}).
pub fn hamiltonian_zz(enc: &PolyEncoding, tones: &[DriveTone], mode: &BosonicMode, t: f64) -> Result<OperatorMatrix> {
    check_kind(tones, DriveKind::Zz)?;
    validate_tones(enc, tones)?;
    let a = annihilation(mode.fock_cutoff);
    let mut h = zero_joint(enc, mode)?;
    for tone in tones {
        let (m, n) = tone.transition;
        let sz = embed_on_ion(enc, &atomic_pauli(enc, PauliAxis::Z, m, n)?, tone.ion)?;
        let arg = mode.detuning * t + tone.phase;
        let motion = &a.scale(C64::from_polar(1.0, arg)) + &a.adjoint().scale(C64::from_polar(1.0, -arg));
        h = &h + &kron(&sz, &motion)?.scale(C64::new(tone.strength / 2.0, 0.0));
    }
    Ok(h)
}

fn zero_joint(enc: &PolyEncoding, mode: &BosonicMode) -> Result<OperatorMatrix> {
    let atoms = enc.level_count() * enc.level_count();
    OperatorMatrix::zeros(atoms * mode.levels()).with_factor_dims(super::joint_factor_dims(enc, mode))
}

/// `H(t) = e^{iδt} M ⊗ â + e^{−iδt} M† ⊗ â†`, stored as the nonzero entries of
/// the atomic drive operator `M` so that applying `H(t)` costs O(nnz(M) · N).
#[derive(Debug, Clone)]
pub struct DriveOperator {
    atom_dim: usize,
    mode_levels: usize,
    detuning: f64,
    couplings: Vec<(usize, usize, C64)>,
    sqrt_n: Vec<f64>,
}

impl DriveOperator {
    pub fn new(enc: &PolyEncoding, tones: &[DriveTone], mode: &BosonicMode) -> Result<Self> {
        validate_tones(enc, tones)?;
        let drive = Self::atomic_drive(enc, tones)?;
        Ok(Self::from_atomic(&drive, mode))
    }

    /// Builds the two-ion operator M from the tones.
    pub fn atomic_drive(enc: &PolyEncoding, tones: &[DriveTone]) -> Result<OperatorMatrix> {
        let atoms = enc.level_count() * enc.level_count();
        let mut drive = OperatorMatrix::zeros(atoms);
        for tone in tones {
            let (m, n) = tone.transition;
            let local = match tone.kind {
                DriveKind::Xx => {
                    let up = atomic_raising(enc, m, n)?;
                    let e = C64::from_polar(1.0, tone.phase);
                    &up.scale(e) + &up.adjoint().scale(e.conj())
                }
                DriveKind::Zz => atomic_pauli(enc, PauliAxis::Z, m, n)?.scale(C64::from_polar(1.0, tone.phase)),
            };
            let term = embed_on_ion(enc, &local, tone.ion)?.scale(C64::new(tone.strength / 2.0, 0.0));
            drive = &drive + &term;
        }
        Ok(drive)
    }

    pub fn from_atomic(drive: &OperatorMatrix, mode: &BosonicMode) -> Self {
        let n = drive.dim();
        let couplings = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter_map(|(i, j)| {
                let z = drive.get(i, j);
                (z != ZERO).then_some((i, j, z))
            })
            .collect();
        Self {
            atom_dim: n,
            mode_levels: mode.levels(),
            detuning: mode.detuning,
            couplings,
            sqrt_n: (0..mode.levels()).map(|k| (k as f64).sqrt()).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.atom_dim * self.mode_levels
    }

    /// True when M is diagonal in the atomic level basis.
    pub fn is_diagonal(&self) -> bool {
        self.couplings.iter().all(|&(i, j, _)| i == j)
    }

    /// out = H(t) psi.
    pub fn apply(&self, t: f64, psi: &[C64], out: &mut [C64]) {
        debug_assert_eq!(psi.len(), self.dim());
        out.fill(ZERO);
        let levels = self.mode_levels;
        let phase = C64::from_polar(1.0, self.detuning * t);
        for &(i, j, m) in &self.couplings {
            let fwd = phase * m;
            let bwd = fwd.conj();
            let (row_i, row_j) = (i * levels, j * levels);
            for n in 0..levels - 1 {
                let s = self.sqrt_n[n + 1];
                // e^{iδt} M_ij ⊗ â : |j, n+1⟩ → |i, n⟩
                out[row_i + n] += fwd * s * psi[row_j + n + 1];
                // e^{−iδt} conj(M_ij) ⊗ â† : |i, n⟩ → |j, n+1⟩
                out[row_j + n + 1] += bwd * s * psi[row_i + n];
            }
        }
    }

    /// Dense H(t), for cross-checking.
    pub fn dense(&self, t: f64) -> Result<OperatorMatrix> {
        let dim = self.dim();
        let mut cols = vec![vec![ZERO; dim]; dim];
        let mut basis = vec![ZERO; dim];
        for (j, col) in cols.iter_mut().enumerate() {
            basis.fill(ZERO);
            basis[j] = C64::new(1.0, 0.0);
            self.apply(t, &basis, col);
        }
        if dim == 0 {
            return Err(Error::structural("empty drive operator"));
        }
        Ok(OperatorMatrix::from_fn(dim, |i, j| cols[j][i]))
    }
}
