//! Gate experiments as seeded parameter sweeps and traces.
//!
//! Every sweep draws Haar-random spectator states, runs the inter-atomic gate
//! and scores the participant pair. Seeds are drawn from a ChaCha stream keyed
//! by `(rng_seed, seed index)`, so seed `k` sees the same spectators at every
//! grid point.

mod output;
mod spectators;
mod sweep;
mod trace;

use std::f64::consts::{FRAC_1_SQRT_2, PI, TAU};

use serde::{Deserialize, Serialize};

use crate::dynamics::{BosonicMode, DriveKind, DriveTone};
use crate::error::{Error, Result};
use crate::linop::{C64, ZERO};
use crate::polyenc::{PolyEncoding, QubitLabel};

pub use output::{
    omega_convention, write_phase_space_csv, write_sweep_csv, write_trace_csv, RunMetadata,
    SCHEMA_VERSION,
};
pub use spectators::{haar_qubit, spectator_slots, spectator_states, SpectatorSlot};
pub use sweep::{
    bell_fidelity, participant_density, run_sweep, run_xx_mismatch_sweep,
    run_zz_phase_mismatch_sweep, SweepOutcome,
};
pub use trace::{run_phase_space, run_population_trace, PhaseSpaceRow, PopulationTrace, TraceRow};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Experiment {
    XxPopulation,
    XxRabiMismatch,
    ZzPhaseSpace,
    ZzPhaseMismatch,
}

impl Experiment {
    pub fn kind(self) -> DriveKind {
        match self {
            Experiment::XxPopulation | Experiment::XxRabiMismatch => DriveKind::Xx,
            Experiment::ZzPhaseSpace | Experiment::ZzPhaseMismatch => DriveKind::Zz,
        }
    }

    pub fn is_sweep(self) -> bool {
        matches!(self, Experiment::XxRabiMismatch | Experiment::ZzPhaseMismatch)
    }

    /// 21 points over ε ∈ [−0.05, 0.05] or Δφ ∈ [−π/2, π/2]; empty for traces.
    pub fn default_grid(self) -> Vec<f64> {
        match self {
            Experiment::XxRabiMismatch => linspace(-0.05, 0.05, 21),
            Experiment::ZzPhaseMismatch => linspace(-PI / 2.0, PI / 2.0, 21),
            _ => Vec::new(),
        }
    }
}

/// Which ions receive the injected mismatch.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MismatchIons {
    #[default]
    Both,
    First,
}

/// The base gate every experiment runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GateSettings {
    pub qubits_per_atom: usize,
    /// Sideband strength g per ion.
    pub strengths: [f64; 2],
    pub detuning: f64,
    pub fock_cutoff: usize,
    /// Defaults to one phase-space loop, 2π/|δ|.
    pub duration: Option<f64>,
    /// Defaults to duration / 4000.
    pub dt: Option<f64>,
    pub sample_stride: usize,
}

impl Default for GateSettings {
    fn default() -> Self {
        Self {
            qubits_per_atom: 2,
            strengths: [1.0, 1.0],
            detuning: 2.0,
            fock_cutoff: 12,
            duration: None,
            dt: None,
            sample_stride: 40,
        }
    }
}

impl GateSettings {
    pub fn duration(&self) -> f64 {
        self.duration.unwrap_or(TAU / self.detuning.abs())
    }

    pub fn dt(&self) -> f64 {
        self.dt.unwrap_or(self.duration() / 4000.0)
    }

    pub fn mode(&self) -> Result<BosonicMode> {
        BosonicMode::new(self.fock_cutoff, self.detuning)
    }

    pub fn encoding(&self) -> Result<PolyEncoding> {
        PolyEncoding::new(self.qubits_per_atom)
    }

    /// Two-body rate Ω = g1·g2/δ used for the Ωt/π axis of population traces.
    pub fn omega(&self) -> f64 {
        self.strengths[0] * self.strengths[1] / self.detuning
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub experiment: Experiment,
    /// Swept mismatch values; `None` selects the experiment's default grid.
    #[serde(default)]
    pub grid: Option<Vec<f64>>,
    #[serde(default = "default_seeds")]
    pub seeds: usize,
    #[serde(default)]
    pub rng_seed: u64,
    /// Participant qubit on ion 0 and ion 1.
    #[serde(default = "default_participants")]
    pub participants: [QubitLabel; 2],
    #[serde(default)]
    pub mismatch_ions: MismatchIons,
    #[serde(default)]
    pub gate: GateSettings,
}

fn default_seeds() -> usize {
    100
}

fn default_participants() -> [QubitLabel; 2] {
    [QubitLabel::V, QubitLabel::V]
}

impl SweepSpec {
    pub fn new(experiment: Experiment) -> Self {
        Self {
            experiment,
            grid: None,
            seeds: default_seeds(),
            rng_seed: 0,
            participants: default_participants(),
            mismatch_ions: MismatchIons::Both,
            gate: GateSettings::default(),
        }
    }

    pub fn grid(&self) -> Vec<f64> {
        self.grid.clone().unwrap_or_else(|| self.experiment.default_grid())
    }

    /// Checks every field, naming the offending one on failure.
    pub fn validate(&self) -> Result<PolyEncoding> {
        if self.seeds == 0 {
            return Err(Error::domain("seeds must be at least 1"));
        }
        if let Some(grid) = &self.grid {
            if grid.is_empty() {
                return Err(Error::domain("grid must not be empty"));
            }
            if let Some(v) = grid.iter().find(|v| !v.is_finite()) {
                return Err(Error::domain(format!("grid contains non-finite value {v}")));
            }
        }
        let g = &self.gate;
        let enc = g.encoding()?;
        for label in self.participants {
            if !enc.contains(label) {
                return Err(Error::domain(format!(
                    "participants: label {label} not present for p = {}",
                    g.qubits_per_atom
                )));
            }
        }
        if g.strengths.iter().any(|s| !(s.is_finite() && *s >= 0.0)) {
            return Err(Error::domain("gate.strengths must be finite and >= 0"));
        }
        if !(g.detuning.is_finite() && g.detuning != 0.0) {
            return Err(Error::domain("gate.detuning must be finite and non-zero"));
        }
        g.mode()?;
        if !(g.duration() > 0.0 && g.duration().is_finite()) {
            return Err(Error::domain("gate.duration must be positive"));
        }
        if !(g.dt() > 0.0 && g.dt() <= g.duration() / 100.0 * (1.0 + 1e-12)) {
            return Err(Error::domain("gate.dt must lie in (0, duration / 100]"));
        }
        if g.sample_stride == 0 {
            return Err(Error::domain("gate.sample_stride must be at least 1"));
        }
        Ok(enc)
    }

    /// Matched tones on the participant edges with `parameter` injected as a
    /// Rabi scale (XX) or beatnote phase offset (ZZ) on each ion's second edge.
    pub fn tones(&self, enc: &PolyEncoding, parameter: f64) -> Result<Vec<DriveTone>> {
        let kind = self.experiment.kind();
        let mut tones = Vec::new();
        for ion in 0..2 {
            let mismatched = match self.mismatch_ions {
                MismatchIons::Both => true,
                MismatchIons::First => ion == 0,
            };
            for (k, &edge) in enc.edges(self.participants[ion])?.iter().enumerate() {
                let mut strength = self.gate.strengths[ion];
                let mut phase = 0.0;
                if mismatched && k == 1 {
                    match kind {
                        DriveKind::Xx => strength *= 1.0 + parameter,
                        DriveKind::Zz => phase += parameter,
                    }
                }
                tones.push(DriveTone::new(ion, edge, strength, phase, kind)?);
            }
        }
        Ok(tones)
    }

    /// Participant starting qubit: |0⟩ for XX gates, |+⟩ for ZZ gates.
    pub fn participant_state(&self) -> [C64; 2] {
        match self.experiment.kind() {
            DriveKind::Xx => [C64::new(1.0, 0.0), ZERO],
            DriveKind::Zz => [C64::new(FRAC_1_SQRT_2, 0.0); 2],
        }
    }

    pub(crate) fn require(&self, experiment: Experiment) -> Result<PolyEncoding> {
        if self.experiment != experiment {
            return Err(Error::domain(format!(
                "experiment: expected {experiment:?}, spec has {:?}",
                self.experiment
            )));
        }
        self.validate()
    }
}

/// Mean, population standard deviation and minimum of one grid point's fidelities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub parameter: f64,
    pub mean_fidelity: f64,
    pub std_fidelity: f64,
    pub min_fidelity: f64,
    pub n_seeds: usize,
    pub n_failures: usize,
    pub reason: String,
}

impl SweepRecord {
    pub fn from_samples(parameter: f64, samples: &[f64], n_seeds: usize, reason: String) -> Self {
        let n_failures = n_seeds - samples.len();
        if samples.is_empty() {
            return Self {
                parameter,
                mean_fidelity: f64::NAN,
                std_fidelity: f64::NAN,
                min_fidelity: f64::NAN,
                n_seeds,
                n_failures,
                reason,
            };
        }
        let n = samples.len() as f64;
        let mean = samples.iter().sum::<f64>() / n;
        let var = samples.iter().map(|f| (f - mean).powi(2)).sum::<f64>() / n;
        Self {
            parameter,
            mean_fidelity: mean,
            std_fidelity: var.sqrt(),
            min_fidelity: samples.iter().copied().fold(f64::INFINITY, f64::min),
            n_seeds,
            n_failures,
            reason,
        }
    }

    pub fn failed(&self) -> bool {
        self.n_failures == self.n_seeds
    }
}

pub fn linspace(start: f64, end: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![start],
        _ => {
            let last = (n - 1) as f64;
            (0..n)
                .map(|i| (start * (last - i as f64) + end * i as f64) / last)
                .collect()
        }
    }
}
