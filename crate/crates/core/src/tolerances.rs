//! Numerical tolerances shared by every module.
//!
//! All thresholds live here so that validation code, the acceptance suite and
//! run metadata report the same numbers.

use serde::Serialize;

/// Largest Hilbert dimension a tensor product may produce.
pub const MAX_HILBERT_DIM: usize = 65_536;

/// Max-abs deviation of U†U from the identity for an operator to count as unitary.
pub const UNITARITY: f64 = 1e-12;

/// Max-abs deviation of H from H† accepted by `expm`.
pub const HERMITICITY: f64 = 1e-10;

/// Unit-trace slack for density operators.
pub const DENSITY_TRACE: f64 = 1e-10;

/// Most negative eigenvalue still accepted as positive semidefinite.
pub const DENSITY_PSD: f64 = 1e-10;

/// Fidelity values are clamped to [0, 1] after allowing this much overshoot.
pub const FIDELITY_RANGE: f64 = 1e-12;

/// Normalization tolerance for prepared states.
pub const STATE_NORM: f64 = 1e-12;

/// Trace preservation of partial traces.
pub const PARTIAL_TRACE: f64 = 1e-12;

/// Max-abs entry error a synthesized gate program may have against its target.
pub const GATE_SYNTHESIS: f64 = 1e-10;

/// Norm drift over a full gate at the default step size.
pub const NORM_DRIFT_TARGET: f64 = 1e-8;

/// Norm drift beyond which an integration is rejected.
pub const NORM_DRIFT_ABORT: f64 = 1e-6;

/// Spectator reduced-state trace distance allowed after a matched inter-atomic gate.
pub const SPECTATOR_DYNAMICS: f64 = 1e-6;

/// Spectator reduced-state trace distance allowed after an intra-atomic gate.
pub const SPECTATOR_INTRA: f64 = 1e-10;

/// Pointwise participant-population agreement between the polyqubit and monoqubit gates.
pub const MONO_POLY_POPULATION: f64 = 1e-6;

/// Largest |⟨a⟩| accepted as a closed phase-space loop.
pub const LOOP_CLOSURE: f64 = 1e-6;

/// Change of any reported fidelity when the Fock cutoff is doubled.
pub const FOCK_CONVERGENCE: f64 = 1e-7;

/// Matched-drive fidelity must reach 1 minus this value.
pub const MATCHED_INFIDELITY: f64 = 1e-6;

/// Standard deviation of the matched-drive fidelity across spectator seeds.
pub const MATCHED_FIDELITY_STD: f64 = 1e-7;

/// Hard floor on the mean Bell fidelity at 0.5 % Rabi mismatch.
pub const RABI_MISMATCH_FLOOR: f64 = 0.999;

/// Reference fidelity quoted for 0.5 % Rabi matching.
pub const RABI_MISMATCH_REFERENCE: f64 = 0.9999;

/// Ceiling on the effective-Hamiltonian population error at δ/g = 50.
pub const EFFECTIVE_LIMIT_ERROR: f64 = 1e-2;

/// Agreement of relabeled (HH, VV, HV) fidelity curves.
pub const RELABEL_SYMMETRY: f64 = 1e-9;

/// Minimum R² of the linear fit of phase-space radius against |λ|.
pub const RADIUS_LINEARITY_R2: f64 = 0.999;

/// Snapshot of the table, written into run metadata.
#[derive(Debug, Clone, Serialize)]
pub struct ToleranceTable {
    pub max_hilbert_dim: usize,
    pub unitarity: f64,
    pub hermiticity: f64,
    pub density_trace: f64,
    pub density_psd: f64,
    pub fidelity_range: f64,
    pub state_norm: f64,
    pub partial_trace: f64,
    pub gate_synthesis: f64,
    pub norm_drift_target: f64,
    pub norm_drift_abort: f64,
    pub spectator_dynamics: f64,
    pub spectator_intra: f64,
    pub mono_poly_population: f64,
    pub loop_closure: f64,
    pub fock_convergence: f64,
    pub matched_infidelity: f64,
    pub matched_fidelity_std: f64,
    pub rabi_mismatch_floor: f64,
    pub rabi_mismatch_reference: f64,
    pub effective_limit_error: f64,
    pub relabel_symmetry: f64,
    pub radius_linearity_r2: f64,
}

pub fn table() -> ToleranceTable {
    ToleranceTable {
        max_hilbert_dim: MAX_HILBERT_DIM,
        unitarity: UNITARITY,
        hermiticity: HERMITICITY,
        density_trace: DENSITY_TRACE,
        density_psd: DENSITY_PSD,
        fidelity_range: FIDELITY_RANGE,
        state_norm: STATE_NORM,
        partial_trace: PARTIAL_TRACE,
        gate_synthesis: GATE_SYNTHESIS,
        norm_drift_target: NORM_DRIFT_TARGET,
        norm_drift_abort: NORM_DRIFT_ABORT,
        spectator_dynamics: SPECTATOR_DYNAMICS,
        spectator_intra: SPECTATOR_INTRA,
        mono_poly_population: MONO_POLY_POPULATION,
        loop_closure: LOOP_CLOSURE,
        fock_convergence: FOCK_CONVERGENCE,
        matched_infidelity: MATCHED_INFIDELITY,
        matched_fidelity_std: MATCHED_FIDELITY_STD,
        rabi_mismatch_floor: RABI_MISMATCH_FLOOR,
        rabi_mismatch_reference: RABI_MISMATCH_REFERENCE,
        effective_limit_error: EFFECTIVE_LIMIT_ERROR,
        relabel_symmetry: RELABEL_SYMMETRY,
        radius_linearity_r2: RADIUS_LINEARITY_R2,
    }
}
