use rayon::prelude::*;

use crate::dynamics::{evolve, joint_slot, joint_state, SimConfig, Trajectory};
use crate::error::{Error, Result};
use crate::linop::{dominant_eigenvector, fidelity, OperatorMatrix, PartialTrace, StateVector, C64, ZERO};
use crate::polyenc::{PolyEncoding, QubitLabel};

use super::spectators::{product_coefficients, spectator_slots, spectator_states};
use super::{Experiment, SweepRecord, SweepSpec};

#[derive(Debug, Clone)]
pub struct SweepOutcome {
    pub records: Vec<SweepRecord>,
    /// Participant target frozen from the matched run.
    pub bell_target: StateVector,
}

/// Reduced state of the two participant qubits (ion 0 first), tracing out the
/// spectators and the mode.
pub fn participant_density(
    enc: &PolyEncoding,
    participants: [QubitLabel; 2],
    state: &StateVector,
) -> Result<OperatorMatrix> {
    let keep = [
        joint_slot(enc, 0, participants[0])?,
        joint_slot(enc, 1, participants[1])?,
    ];
    state.partial_trace(&keep)
}

pub fn bell_fidelity(rho: &OperatorMatrix, target: &StateVector) -> Result<f64> {
    fidelity(rho, target)
}

/// Atomic ket of one ion with the participant in `participant` and the
/// spectators in the computational state given by `spectator_bits`
/// (most significant label first).
fn ion_state(
    enc: &PolyEncoding,
    participant: QubitLabel,
    participant_state: [C64; 2],
    spectator_bits: &[usize],
) -> Result<StateVector> {
    let mut bits = spectator_bits.iter();
    let amps = enc.labels().iter().fold(vec![C64::new(1.0, 0.0)], |acc, &label| {
        let q = if label == participant {
            participant_state
        } else {
            let mut q = [ZERO; 2];
            q[*bits.next().expect("one bit per spectator")] = C64::new(1.0, 0.0);
            q
        };
        acc.iter().flat_map(|&c| [c * q[0], c * q[1]]).collect()
    });
    StateVector::new(amps, vec![2; enc.qubits()])
}

/// One trajectory per spectator computational configuration, participants
/// fixed. Any spectator product state evolves as the matching superposition
/// of these columns.
pub(crate) fn spectator_columns(
    spec: &SweepSpec,
    enc: &PolyEncoding,
    parameter: f64,
    sample_stride: usize,
) -> Result<Vec<Trajectory>> {
    let mode = spec.gate.mode()?;
    let tones = spec.tones(enc, parameter)?;
    let per_ion = enc.qubits() - 1;
    let count = 2 * per_ion;
    let part = spec.participant_state();
    (0..1usize << count)
        .map(|s| {
            let bits: Vec<usize> = (0..count).map(|j| (s >> (count - 1 - j)) & 1).collect();
            let ion0 = ion_state(enc, spec.participants[0], part, &bits[..per_ion])?;
            let ion1 = ion_state(enc, spec.participants[1], part, &bits[per_ion..])?;
            let config = SimConfig {
                qubits_per_atom: enc.qubits(),
                tones: tones.clone(),
                mode,
                duration: spec.gate.duration(),
                dt: spec.gate.dt(),
                initial_state: joint_state(&ion0, &ion1, &mode)?,
                sample_stride,
                rng_seed: spec.rng_seed,
            };
            evolve(&config)
        })
        .collect()
}

/// Σ_s c_s |column_s⟩.
pub(crate) fn combine(columns: &[&StateVector], coefficients: &[C64]) -> Result<StateVector> {
    if columns.len() != coefficients.len() || columns.is_empty() {
        return Err(Error::structural("one coefficient per column required"));
    }
    let mut amps = vec![ZERO; columns[0].dim()];
    for (col, &c) in columns.iter().zip(coefficients) {
        for (a, x) in amps.iter_mut().zip(col.amplitudes()) {
            *a += c * x;
        }
    }
    StateVector::new(amps, columns[0].factor_dims().to_vec())
}

/// Spectator coefficient vectors for every seed of the spec.
pub(crate) fn seed_coefficients(spec: &SweepSpec, enc: &PolyEncoding) -> Vec<Vec<C64>> {
    let slots = spectator_slots(enc, spec.participants).len();
    (0..spec.seeds as u64)
        .map(|k| product_coefficients(&spectator_states(spec.rng_seed, k, slots)))
        .collect()
}

fn final_states(columns: &[Trajectory]) -> Vec<&StateVector> {
    columns.iter().map(|t| t.final_state()).collect()
}

fn score_point(
    spec: &SweepSpec,
    enc: &PolyEncoding,
    parameter: f64,
    columns: Result<Vec<Trajectory>>,
    coefficients: &[Vec<C64>],
    target: &StateVector,
) -> SweepRecord {
    let columns = match columns {
        Ok(c) => c,
        Err(e) => return SweepRecord::from_samples(parameter, &[], spec.seeds, e.to_string()),
    };
    let finals = final_states(&columns);
    let mut samples = Vec::with_capacity(coefficients.len());
    let mut reason = String::new();
    for coeffs in coefficients {
        let scored = combine(&finals, coeffs)
            .and_then(|psi| participant_density(enc, spec.participants, &psi))
            .and_then(|rho| bell_fidelity(&rho, target));
        match scored {
            Ok(f) => samples.push(f),
            Err(e) if reason.is_empty() => reason = e.to_string(),
            Err(_) => {}
        }
    }
    SweepRecord::from_samples(parameter, &samples, spec.seeds, reason)
}

/// Shared sweep driver: freezes the target from the matched run, then scores
/// every grid point in parallel. Records keep grid order.
fn mismatch_sweep(spec: &SweepSpec, enc: &PolyEncoding) -> Result<SweepOutcome> {
    let coefficients = seed_coefficients(spec, enc);
    let matched = spectator_columns(spec, enc, 0.0, usize::MAX)?;
    let reference = combine(&final_states(&matched), &coefficients[0])?;
    let bell_target = dominant_eigenvector(&participant_density(enc, spec.participants, &reference)?)?;

    let records = spec
        .grid()
        .par_iter()
        .map(|&x| {
            let columns = if x == 0.0 {
                Ok(matched.clone())
            } else {
                spectator_columns(spec, enc, x, usize::MAX)
            };
            score_point(spec, enc, x, columns, &coefficients, &bell_target)
        })
        .collect();
    Ok(SweepOutcome { records, bell_target })
}

/// Bell fidelity versus Rabi mismatch ε on each ion's second participant edge.
pub fn run_xx_mismatch_sweep(spec: &SweepSpec) -> Result<SweepOutcome> {
    let enc = spec.require(Experiment::XxRabiMismatch)?;
    mismatch_sweep(spec, &enc)
}

/// Bell fidelity versus beatnote phase offset Δφ on each ion's second participant edge.
pub fn run_zz_phase_mismatch_sweep(spec: &SweepSpec) -> Result<SweepOutcome> {
    let enc = spec.require(Experiment::ZzPhaseMismatch)?;
    mismatch_sweep(spec, &enc)
}

pub fn run_sweep(spec: &SweepSpec) -> Result<SweepOutcome> {
    match spec.experiment {
        Experiment::XxRabiMismatch => run_xx_mismatch_sweep(spec),
        Experiment::ZzPhaseMismatch => run_zz_phase_mismatch_sweep(spec),
        other => Err(Error::domain(format!("experiment: {other:?} is not a fidelity sweep"))),
    }
}
