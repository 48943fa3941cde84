use crate::error::{Error, Result};
use crate::linop::{StateVector, C64, ZERO};
use crate::tolerances;

use super::{DriveOperator, SimConfig};

#[derive(Debug, Clone)]
pub struct TrajectorySample {
    pub step: usize,
    pub t: f64,
    pub state: StateVector,
    /// | ‖ψ(t)‖ − 1 |
    pub norm_error: f64,
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    /// Step actually used (the requested step shrunk to divide the duration evenly).
    pub dt: f64,
    pub steps: usize,
    pub samples: Vec<TrajectorySample>,
    /// Largest norm error seen at any step.
    pub max_norm_drift: f64,
}

impl Trajectory {
    pub fn final_state(&self) -> &StateVector {
        &self.samples.last().expect("trajectories always hold the initial sample").state
    }
}

/// Number of steps and the adjusted step size covering `duration` exactly.
pub(crate) fn step_grid(duration: f64, dt: f64) -> (usize, f64) {
    let steps = ((duration / dt) - 1e-9).ceil().max(1.0) as usize;
    (steps, duration / steps as f64)
}

/// Classic fourth-order Runge–Kutta for i dψ/dt = H(t) ψ with H evaluated at
/// the start, midpoint (twice) and end of each step.
///
/// `apply_h(t, psi, out)` must write H(t)·psi into `out`.
pub(crate) fn integrate<F>(
    mut apply_h: F,
    initial: &StateVector,
    duration: f64,
    dt: f64,
    sample_stride: usize,
) -> Result<Trajectory>
where
    F: FnMut(f64, &[C64], &mut [C64]),
{
    let (steps, dt) = step_grid(duration, dt);
    let dim = initial.dim();
    let dims = initial.factor_dims().to_vec();
    let mut psi = initial.amplitudes().to_vec();
    let mut k = [vec![ZERO; dim], vec![ZERO; dim], vec![ZERO; dim], vec![ZERO; dim]];
    let mut stage = vec![ZERO; dim];
    let minus_i = C64::new(0.0, -1.0);
    let norm_error = |psi: &[C64]| (psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt() - 1.0).abs();

    let mut samples = vec![TrajectorySample {
        step: 0,
        t: 0.0,
        state: initial.clone(),
        norm_error: norm_error(&psi),
    }];
    let mut max_drift = samples[0].norm_error;

    for step in 0..steps {
        let t = step as f64 * dt;
        let [k1, k2, k3, k4] = &mut k;

        apply_h(t, &psi, k1);
        for ((s, p), d) in stage.iter_mut().zip(&psi).zip(k1.iter()) {
            *s = p + minus_i * d * (0.5 * dt);
        }
        apply_h(t + 0.5 * dt, &stage, k2);
        for ((s, p), d) in stage.iter_mut().zip(&psi).zip(k2.iter()) {
            *s = p + minus_i * d * (0.5 * dt);
        }
        apply_h(t + 0.5 * dt, &stage, k3);
        for ((s, p), d) in stage.iter_mut().zip(&psi).zip(k3.iter()) {
            *s = p + minus_i * d * dt;
        }
        apply_h(t + dt, &stage, k4);
        let w = minus_i * (dt / 6.0);
        for i in 0..dim {
            psi[i] += w * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }

        let err = norm_error(&psi);
        max_drift = max_drift.max(err);
        let done = step + 1;
        if done % sample_stride == 0 || done == steps {
            samples.push(TrajectorySample {
                step: done,
                t: done as f64 * dt,
                state: StateVector::new(psi.clone(), dims.clone())?,
                norm_error: err,
            });
        }
    }

    if !(max_drift <= tolerances::NORM_DRIFT_ABORT) {
        // Norm loss of RK4 on a unitary flow scales as dt^5 over a fixed duration.
        let ratio = if max_drift.is_finite() {
            (tolerances::NORM_DRIFT_TARGET / max_drift).powf(0.2)
        } else {
            0.1
        };
        return Err(Error::IntegrationFailure {
            drift: max_drift,
            limit: tolerances::NORM_DRIFT_ABORT,
            dt,
            suggested_dt: 0.9 * dt * ratio,
        });
    }

    Ok(Trajectory {
        dt,
        steps,
        samples,
        max_norm_drift: max_drift,
    })
}

/// Integrates the XX or ZZ gate Hamiltonian described by `config`.
pub fn evolve(config: &SimConfig) -> Result<Trajectory> {
    let enc = config.validate()?;
    if let Some(first) = config.tones.first() {
        super::check_kind(&config.tones, first.kind)?;
    }
    let drive = DriveOperator::new(&enc, &config.tones, &config.mode)?;
    integrate(
        |t, psi, out| drive.apply(t, psi, out),
        &config.initial_state,
        config.duration,
        config.dt,
        config.sample_stride,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{joint_state, matched_tones, BosonicMode, DriveKind};
    use crate::polyenc::{encode_state, PolyEncoding, QubitLabel};
    use std::f64::consts::TAU;

    fn config(g: f64, dt_fraction: usize) -> SimConfig {
        let enc = PolyEncoding::new(2).unwrap();
        let mode = BosonicMode::new(8, 2.0).unwrap();
        let mut tones = matched_tones(&enc, 0, QubitLabel::V, g, 0.0, DriveKind::Xx).unwrap();
        tones.extend(matched_tones(&enc, 1, QubitLabel::V, g, 0.0, DriveKind::Xx).unwrap());
        let ion = encode_state(&enc, &[1, 0]).unwrap();
        let duration = TAU / mode.detuning;
        SimConfig {
            qubits_per_atom: 2,
            tones,
            mode,
            duration,
            dt: duration / dt_fraction as f64,
            initial_state: joint_state(&ion, &ion, &mode).unwrap(),
            sample_stride: 10,
            rng_seed: 0,
        }
    }

    #[test]
    fn zero_hamiltonian_is_static() {
        let cfg = config(0.0, 400);
        let traj = evolve(&cfg).unwrap();
        assert_eq!(traj.samples.len(), 41);
        for s in &traj.samples {
            assert_eq!(s.state, cfg.initial_state);
        }
    }

    #[test]
    fn step_grid_covers_duration() {
        let (steps, dt) = step_grid(1.0, 0.3);
        assert_eq!(steps, 4);
        assert!((dt - 0.25).abs() < 1e-15);
        assert_eq!(step_grid(1.0, 0.25).0, 4);
    }

    #[test]
    fn final_sample_lands_on_duration() {
        let mut cfg = config(1.0, 1000);
        cfg.sample_stride = 300;
        let traj = evolve(&cfg).unwrap();
        let last = traj.samples.last().unwrap();
        assert_eq!(last.step, 1000);
        assert!((last.t - cfg.duration).abs() < 1e-12);
        assert!(traj.max_norm_drift < tolerances::NORM_DRIFT_TARGET);
    }

    #[test]
    fn coarse_step_reports_integration_failure() {
        // A drive far stronger than the detuning makes T/100 far too coarse.
        let cfg = config(40.0, 100);
        match evolve(&cfg) {
            Err(Error::IntegrationFailure { drift, suggested_dt, dt, .. }) => {
                assert!(drift > tolerances::NORM_DRIFT_ABORT);
                assert!(suggested_dt < dt);
            }
            other => panic!("expected integration failure, got {other:?}"),
        }
    }

    #[test]
    fn invalid_configs_rejected() {
        let mut cfg = config(1.0, 50);
        assert!(matches!(evolve(&cfg), Err(Error::Domain(_))));
        cfg = config(1.0, 400);
        cfg.mode.fock_cutoff = 3;
        assert!(evolve(&cfg).is_err());
        cfg = config(1.0, 400);
        cfg.initial_state = cfg.initial_state.scaled(C64::new(2.0, 0.0));
        assert!(matches!(evolve(&cfg), Err(Error::Domain(_))));
    }
}
