use serde::Serialize;

use crate::error::{Error, Result};
use crate::linop::{C64, ZERO};

use super::integrate::evolve;
use super::{DriveOperator, SimConfig};

const EIGEN_MERGE: f64 = 1e-9;
const POPULATION_FLOOR: f64 = 1e-14;
const VACUUM_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseSpacePoint {
    pub t: f64,
    pub alpha: C64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseSpaceBranch {
    pub label: String,
    /// Drive-operator eigenvalue for this branch; `None` for basis-state fallback branches.
    pub eigenvalue: Option<C64>,
    /// Atomic basis states (ion0 level · 2^p + ion1 level) in this branch.
    pub atomic_states: Vec<usize>,
    pub population: f64,
    pub points: Vec<PhaseSpacePoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseSpaceResult {
    /// False when the drive is not diagonal in the atomic basis and the
    /// branches are reported per basis state instead of per eigenvalue.
    pub decomposable: bool,
    pub branches: Vec<PhaseSpaceBranch>,
}

/// α(t) = (λ*/δ)(e^{−iδt} − 1) for a branch with drive eigenvalue λ, starting in vacuum.
pub fn analytic_branch_alpha(lambda: C64, detuning: f64, t: f64) -> C64 {
    lambda.conj() / detuning * (C64::from_polar(1.0, -detuning * t) - 1.0)
}

fn branch_label(lambda: C64) -> String {
    if lambda.im.abs() < EIGEN_MERGE {
        format!("{:+.6}", lambda.re)
    } else {
        format!("{:+.6}{:+.6}i", lambda.re, lambda.im)
    }
}

/// ⟨â⟩ of the mode conditioned on the atomic states in `group`.
fn conditional_alpha(psi: &[C64], group: &[usize], levels: usize) -> C64 {
    let mut num = ZERO;
    let mut pop = 0.0;
    for &k in group {
        let row = &psi[k * levels..(k + 1) * levels];
        pop += row.iter().map(|z| z.norm_sqr()).sum::<f64>();
        for n in 1..levels {
            num += row[n - 1].conj() * row[n] * (n as f64).sqrt();
        }
    }
    if pop > 0.0 {
        num / pop
    } else {
        ZERO
    }
}

/// Mode displacement per branch over the gate.
///
/// With a diagonal drive each atomic basis state k feels the force
/// `M_kk`, so basis states are grouped by that eigenvalue and the
/// conditional ⟨â⟩ is tracked per group. Otherwise one branch is reported
/// per populated atomic basis state.
pub fn phase_space_trajectory(config: &SimConfig) -> Result<PhaseSpaceResult> {
    let enc = config.validate()?;
    let drive = DriveOperator::atomic_drive(&enc, &config.tones)?;
    let levels = config.mode.levels();
    let atoms = drive.dim();

    let psi0 = config.initial_state.amplitudes();
    for k in 0..atoms {
        let excited: f64 = psi0[k * levels + 1..(k + 1) * levels].iter().map(|z| z.norm_sqr()).sum();
        if excited > VACUUM_TOLERANCE {
            return Err(Error::contract("phase-space branches need the mode to start in vacuum"));
        }
    }
    let populations: Vec<f64> = (0..atoms).map(|k| psi0[k * levels].norm_sqr()).collect();
    let populated: Vec<usize> = (0..atoms).filter(|&k| populations[k] > POPULATION_FLOOR).collect();

    let decomposable = (0..atoms).all(|i| (0..atoms).all(|j| i == j || drive.get(i, j) == ZERO));
    let mut groups: Vec<(Option<C64>, Vec<usize>)> = Vec::new();
    if decomposable {
        for &k in &populated {
            let lambda = drive.get(k, k);
            match groups
                .iter_mut()
                .find(|(l, _)| l.is_some_and(|l| (l - lambda).norm() < EIGEN_MERGE))
            {
                Some((_, members)) => members.push(k),
                None => groups.push((Some(lambda), vec![k])),
            }
        }
        groups.sort_by(|a, b| {
            let (x, y) = (a.0.unwrap_or(ZERO), b.0.unwrap_or(ZERO));
            x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im))
        });
    } else {
        groups = populated.iter().map(|&k| (None, vec![k])).collect();
    }

    let traj = evolve(config)?;
    let branches = groups
        .into_iter()
        .map(|(eigenvalue, members)| PhaseSpaceBranch {
            label: match eigenvalue {
                Some(l) => branch_label(l),
                None => format!("basis:{}", members[0]),
            },
            eigenvalue,
            population: members.iter().map(|&k| populations[k]).sum(),
            points: traj
                .samples
                .iter()
                .map(|s| PhaseSpacePoint {
                    t: s.t,
                    alpha: conditional_alpha(s.state.amplitudes(), &members, levels),
                })
                .collect(),
            atomic_states: members,
        })
        .collect();

    Ok(PhaseSpaceResult { decomposable, branches })
}
