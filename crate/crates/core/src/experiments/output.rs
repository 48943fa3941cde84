use std::io::{self, Write};

use serde::Serialize;

use crate::tolerances::{self, ToleranceTable};

use super::trace::{PhaseSpaceRow, PopulationTrace};
use super::{SweepRecord, SweepSpec};

pub const SCHEMA_VERSION: u32 = 1;

pub fn omega_convention() -> &'static str {
    "Omega = g1*g2/delta (twice the effective two-body coupling g1*g2/(2*delta)); \
     the maximally entangled point of the XX gate falls at Omega*t/pi = 0.5"
}

/// JSON sidecar written next to every CSV.
#[derive(Debug, Clone, Serialize)]
pub struct RunMetadata {
    pub schema_version: u32,
    pub software_version: &'static str,
    pub config_sha256: String,
    pub spec: SweepSpec,
    pub tolerances: ToleranceTable,
    pub omega_convention: &'static str,
    pub wall_time_seconds: f64,
    /// Frozen participant target as (re, im) pairs, for fidelity sweeps.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bell_target: Option<Vec<[f64; 2]>>,
}

impl RunMetadata {
    pub fn new(spec: &SweepSpec, config_sha256: &str, wall_time_seconds: f64) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            software_version: env!("CARGO_PKG_VERSION"),
            config_sha256: config_sha256.to_owned(),
            spec: spec.clone(),
            tolerances: tolerances::table(),
            omega_convention: omega_convention(),
            wall_time_seconds,
            bell_target: None,
        }
    }
}

fn header<W: Write>(w: &mut W, config_sha256: &str) -> io::Result<()> {
    writeln!(w, "# schema_version={SCHEMA_VERSION}")?;
    writeln!(w, "# config_sha256={config_sha256}")
}

fn rows<W: Write, R: Serialize>(w: W, records: impl IntoIterator<Item = R>) -> io::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for r in records {
        out.serialize(r)?;
    }
    out.flush()
}

/// parameter,mean_fidelity,std_fidelity,min_fidelity,n_seeds,n_failures,reason
pub fn write_sweep_csv<W: Write>(mut w: W, config_sha256: &str, records: &[SweepRecord]) -> io::Result<()> {
    header(&mut w, config_sha256)?;
    rows(w, records)
}

#[derive(Serialize)]
struct TraceCsvRow {
    t: f64,
    p00: f64,
    p01: f64,
    p10: f64,
    p11: f64,
    norm_error: f64,
    seed: usize,
    omega_t_over_pi: f64,
    oracle_p00: f64,
    oracle_p11: f64,
}

/// t,p00,p01,p10,p11,norm_error,seed,omega_t_over_pi,oracle_p00,oracle_p11
pub fn write_trace_csv<W: Write>(mut w: W, config_sha256: &str, trace: &PopulationTrace) -> io::Result<()> {
    header(&mut w, config_sha256)?;
    rows(
        w,
        trace.rows.iter().map(|r| TraceCsvRow {
            t: r.t,
            p00: r.populations[0],
            p01: r.populations[1],
            p10: r.populations[2],
            p11: r.populations[3],
            norm_error: r.norm_error,
            seed: r.seed,
            omega_t_over_pi: r.omega_t_over_pi,
            oracle_p00: r.oracle[0],
            oracle_p11: r.oracle[1],
        }),
    )
}

#[derive(Serialize)]
struct PhaseCsvRow<'a> {
    t: f64,
    branch_label: &'a str,
    re_alpha: f64,
    im_alpha: f64,
    seed: usize,
}

/// t,branch_label,re_alpha,im_alpha,seed
pub fn write_phase_space_csv<W: Write>(mut w: W, config_sha256: &str, runs: &[PhaseSpaceRow]) -> io::Result<()> {
    header(&mut w, config_sha256)?;
    rows(
        w,
        runs.iter().flat_map(|run| {
            run.result.branches.iter().flat_map(move |b| {
                b.points.iter().map(move |p| PhaseCsvRow {
                    t: p.t,
                    branch_label: &b.label,
                    re_alpha: p.alpha.re,
                    im_alpha: p.alpha.im,
                    seed: run.seed,
                })
            })
        }),
    )
}
