#![allow(dead_code)]

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use polyqubit::dynamics::{
    effective_hamiltonian, evolve, joint_state, matched_tones, BosonicMode, DriveKind, SimConfig,
};
use polyqubit::experiments::haar_qubit;
use polyqubit::linop::expm;
use polyqubit::polyenc::{PolyEncoding, QubitLabel};
use polyqubit::{OperatorMatrix, PartialTrace, StateVector, C64};

pub fn participant_qubit(kind: DriveKind) -> [C64; 2] {
    match kind {
        DriveKind::Xx => [C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
        DriveKind::Zz => [C64::new(FRAC_1_SQRT_2, 0.0); 2],
    }
}

/// One atom with `participant` in `part` and each other label in the next
/// state from `spectators`.
pub fn atom_state(
    enc: &PolyEncoding,
    participant: QubitLabel,
    part: [C64; 2],
    spectators: &mut impl Iterator<Item = [C64; 2]>,
) -> StateVector {
    let amps = enc.labels().iter().fold(vec![C64::new(1.0, 0.0)], |acc, &l| {
        let q = if l == participant { part } else { spectators.next().unwrap() };
        acc.iter().flat_map(|&c| [c * q[0], c * q[1]]).collect()
    });
    StateVector::new(amps, vec![2; enc.qubits()]).unwrap()
}

pub struct Matched {
    pub enc: PolyEncoding,
    pub config: SimConfig,
    pub spectators: Vec<[C64; 2]>,
}

/// Matched gate between two atoms with Haar spectators drawn from `seed`.
#[allow(clippy::too_many_arguments)]
pub fn matched_config(
    p: usize,
    kind: DriveKind,
    participants: [QubitLabel; 2],
    g: [f64; 2],
    detuning: f64,
    cutoff: usize,
    duration: f64,
    dt: f64,
    stride: usize,
    seed: u64,
) -> Matched {
    let enc = PolyEncoding::new(p).unwrap();
    let mode = BosonicMode::new(cutoff, detuning).unwrap();
    let mut tones = matched_tones(&enc, 0, participants[0], g[0], 0.0, kind).unwrap();
    tones.extend(matched_tones(&enc, 1, participants[1], g[1], 0.0, kind).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let spectators: Vec<[C64; 2]> = (0..2 * (p - 1)).map(|_| haar_qubit(&mut rng)).collect();
    let mut it = spectators.iter().copied();
    let part = participant_qubit(kind);
    let ion0 = atom_state(&enc, participants[0], part, &mut it);
    let ion1 = atom_state(&enc, participants[1], part, &mut it);
    let config = SimConfig {
        qubits_per_atom: p,
        tones,
        mode,
        duration,
        dt,
        initial_state: joint_state(&ion0, &ion1, &mode).unwrap(),
        sample_stride: stride,
        rng_seed: seed,
    };
    Matched { enc, config, spectators }
}

/// Default operating point: g = 1, δ = 2, one loop, T/4000, cutoff 12.
pub fn operating_point(kind: DriveKind, participants: [QubitLabel; 2], seed: u64, stride: usize) -> Matched {
    matched_config(2, kind, participants, [1.0, 1.0], 2.0, 12, PI, PI / 4000.0, stride, seed)
}

/// Atomic (mode traced out) density matrix of a joint state.
pub fn atomic_density(enc: &PolyEncoding, psi: &StateVector) -> OperatorMatrix {
    let keep: Vec<usize> = (0..2 * enc.qubits()).collect();
    psi.partial_trace(&keep).unwrap()
}

/// Largest entrywise gap between the atomic state of the full evolution and
/// exp(−i H_eff t) applied to the initial atomic state, over all samples.
/// With g = 1 and δ = ratio the run lasts πδ/2, which is a quarter period of
/// the effective coupling and an integer number of phase-space loops.
pub fn effective_limit_error(kind: DriveKind, ratio: f64) -> f64 {
    let g = 1.0;
    let delta = ratio * g;
    let duration = PI * delta / (2.0 * g * g);
    let dt = 2.0 * PI / delta / 200.0;
    let m = matched_config(2, kind, [QubitLabel::V; 2], [g, g], delta, 6, duration, dt, 50, 11);
    let traj = evolve(&m.config).unwrap();
    let h = effective_hamiltonian(&m.enc, kind, [QubitLabel::V; 2], g, g, delta).unwrap();
    let atom0 = atomic_initial(&m);
    let mut worst: f64 = 0.0;
    for s in &traj.samples {
        let eff = expm(&h, s.t).unwrap().apply(&atom0).unwrap();
        let full = atomic_density(&m.enc, &s.state);
        worst = worst.max(full.max_abs_diff(&eff.density()));
    }
    worst
}

/// Initial atomic ket (mode vacuum stripped).
pub fn atomic_initial(m: &Matched) -> StateVector {
    let levels = m.config.mode.levels();
    let amps: Vec<C64> = m.config.initial_state.amplitudes().iter().step_by(levels).copied().collect();
    StateVector::new(amps, vec![2; 2 * m.enc.qubits()]).unwrap()
}
