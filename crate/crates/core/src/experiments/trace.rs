use rayon::prelude::*;
use serde::Serialize;

use crate::dynamics::{
    monoqubit_ms_oracle, participant_populations, phase_space_trajectory, MonoqubitDrive,
    PhaseSpaceResult, SimConfig,
};
use crate::error::Result;
use crate::linop::{StateVector, C64};
use crate::polyenc::PolyEncoding;

use super::spectators::spectator_states;
use super::sweep::{combine, seed_coefficients, spectator_columns};
use super::{Experiment, SweepSpec};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceRow {
    pub t: f64,
    /// P(00), P(01), P(10), P(11) of the participants, ion 0 digit first.
    pub populations: [f64; 4],
    pub norm_error: f64,
    pub seed: usize,
    pub omega_t_over_pi: f64,
    /// P(00) and P(11) from the two-level reference at the same time.
    pub oracle: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PopulationTrace {
    pub omega: f64,
    pub rows: Vec<TraceRow>,
}

/// Participant populations over the XX gate for every seed, alongside the
/// two-level reference curve sampled at the same times.
pub fn run_population_trace(spec: &SweepSpec) -> Result<PopulationTrace> {
    let enc = spec.require(Experiment::XxPopulation)?;
    let g = &spec.gate;
    let mode = g.mode()?;
    let stride = g.sample_stride;

    let part = spec.participant_state();
    let oracle_init = StateVector::new(
        vec![part[0] * part[0], part[0] * part[1], part[1] * part[0], part[1] * part[1]],
        vec![2, 2],
    )?;
    let oracle = monoqubit_ms_oracle(
        &MonoqubitDrive {
            g1: g.strengths[0],
            g2: g.strengths[1],
            mode,
            duration: g.duration(),
            dt: g.dt(),
            sample_stride: stride,
        },
        &oracle_init,
    )?;
    let mono = PolyEncoding::new(1)?;
    let oracle_pops: Vec<[f64; 2]> = oracle
        .samples
        .iter()
        .map(|s| {
            let p = participant_populations(
                &mono,
                [crate::polyenc::QubitLabel::V; 2],
                mode.levels(),
                s.state.amplitudes(),
            );
            [p[0], p[3]]
        })
        .collect();

    let columns = spectator_columns(spec, &enc, 0.0, stride)?;
    let coefficients = seed_coefficients(spec, &enc);
    let omega = g.omega();

    let per_seed: Vec<Result<Vec<TraceRow>>> = coefficients
        .par_iter()
        .enumerate()
        .map(|(seed, coeffs)| {
            (0..columns[0].samples.len())
                .map(|i| {
                    let at: Vec<&StateVector> = columns.iter().map(|c| &c.samples[i].state).collect();
                    let psi = combine(&at, coeffs)?;
                    let t = columns[0].samples[i].t;
                    Ok(TraceRow {
                        t,
                        populations: participant_populations(&enc, spec.participants, mode.levels(), psi.amplitudes()),
                        norm_error: (psi.norm() - 1.0).abs(),
                        seed,
                        omega_t_over_pi: omega * t / std::f64::consts::PI,
                        oracle: oracle_pops[i],
                    })
                })
                .collect()
        })
        .collect();

    let mut rows = Vec::new();
    for seed_rows in per_seed {
        rows.extend(seed_rows?);
    }
    Ok(PopulationTrace { omega, rows })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseSpaceRow {
    pub seed: usize,
    pub result: PhaseSpaceResult,
}

/// Mode phase-space branches over the ZZ gate, one evolution per seed with
/// fresh spectator states.
pub fn run_phase_space(spec: &SweepSpec) -> Result<Vec<PhaseSpaceRow>> {
    let enc = spec.require(Experiment::ZzPhaseSpace)?;
    let g = &spec.gate;
    let mode = g.mode()?;
    let tones = spec.tones(&enc, 0.0)?;
    let part = spec.participant_state();
    let slots = super::spectators::spectator_slots(&enc, spec.participants);

    (0..spec.seeds)
        .into_par_iter()
        .map(|seed| {
            let states = spectator_states(spec.rng_seed, seed as u64, slots.len());
            let mut next = states.iter();
            let mut ions = Vec::with_capacity(2);
            for ion in 0..2 {
                let amps = enc.labels().iter().fold(vec![C64::new(1.0, 0.0)], |acc, &label| {
                    let q = if label == spec.participants[ion] {
                        part
                    } else {
                        *next.next().expect("one state per spectator")
                    };
                    acc.iter().flat_map(|&c| [c * q[0], c * q[1]]).collect()
                });
                ions.push(StateVector::new(amps, vec![2; enc.qubits()])?);
            }
            let config = SimConfig {
                qubits_per_atom: enc.qubits(),
                tones: tones.clone(),
                mode,
                duration: g.duration(),
                dt: g.dt(),
                initial_state: crate::dynamics::joint_state(&ions[0], &ions[1], &mode)?,
                sample_stride: g.sample_stride,
                rng_seed: spec.rng_seed,
            };
            Ok(PhaseSpaceRow {
                seed,
                result: phase_space_trajectory(&config)?,
            })
        })
        .collect()
}
