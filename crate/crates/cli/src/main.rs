mod config;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::Context;
use clap::{Parser, Subcommand};
use polyqubit::experiments::{
    run_phase_space, run_population_trace, run_sweep, write_phase_space_csv, write_sweep_csv,
    write_trace_csv, Experiment, RunMetadata,
};
use polyqubit::intragates::{gate_suite, verify_program};
use polyqubit::polyenc::{hypercube_edges, PolyEncoding};
use polyqubit::tolerances;
use serde::Serialize;

use config::{spec_hash, ConfigError, Format, RunConfig};

#[derive(Parser)]
#[command(name = "polyqubit", version, about = "Polyqubit gate synthesis and trapped-ion gate dynamics")]
struct Cli {
    /// Worker threads for sweeps (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify the intra-atomic gate suite for p qubits per atom.
    VerifyGates {
        #[arg(long, value_parser = clap::value_parser!(u8).range(2..=4))]
        p: u8,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Print the level table and hypercube edges of a p-qubit encoding.
    ShowEncoding {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
        p: u8,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Run a population trace or phase-space experiment.
    Evolve(RunArgs),
    /// Run a fidelity sweep.
    Sweep(RunArgs),
}

#[derive(clap::Args)]
struct RunArgs {
    config: PathBuf,
    /// Output directory (overrides `output.dir`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Number of random spectator seeds (overrides `seeds`).
    #[arg(long)]
    seeds: Option<usize>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

/// Runtime or numerical failure; maps to exit status 1.
#[derive(Debug)]
struct RunFailure(String);

impl std::fmt::Display for RunFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for RunFailure {}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot start {n} threads: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<ConfigError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

fn run(command: Command) -> anyhow::Result<ExitCode> {
    match command {
        Command::VerifyGates { p, format } => verify_gates(p as usize, format),
        Command::ShowEncoding { p, format } => show_encoding(p as usize, format),
        Command::Evolve(args) => evolve(&args),
        Command::Sweep(args) => sweep(&args),
    }
}

#[derive(Serialize)]
struct GateLine {
    gate: String,
    max_entry_error: f64,
    unitarity_error: f64,
    passed: bool,
}

fn verify_gates(p: usize, format: Format) -> anyhow::Result<ExitCode> {
    let mut lines = Vec::new();
    for prog in gate_suite(p)? {
        let report = verify_program(&prog)?;
        lines.push(GateLine {
            gate: prog.name().to_owned(),
            max_entry_error: report.max_entry_error,
            unitarity_error: report.unitarity_error,
            passed: report.max_entry_error < tolerances::GATE_SYNTHESIS,
        });
    }
    let all = lines.iter().all(|l| l.passed);
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&lines)?),
        Format::Csv => {
            for l in &lines {
                println!(
                    "{} {:<28} max_entry_error={:.3e} unitarity_error={:.3e}",
                    if l.passed { "PASS" } else { "FAIL" },
                    l.gate,
                    l.max_entry_error,
                    l.unitarity_error
                );
            }
            println!("{} gates, {}", lines.len(), if all { "all passed" } else { "FAILURES" });
        }
    }
    Ok(if all { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

#[derive(Serialize)]
struct EncodingListing {
    qubits_per_atom: usize,
    labels: Vec<String>,
    levels: Vec<(usize, String)>,
    edges: Vec<(String, Vec<(usize, usize)>)>,
}

fn show_encoding(p: usize, format: Format) -> anyhow::Result<ExitCode> {
    let enc = PolyEncoding::new(p)?;
    let labels: Vec<String> = enc.labels().iter().map(|l| l.to_string()).collect();
    let levels = (0..enc.level_count())
        .map(|level| {
            let bits = enc.bits_of(level)?;
            Ok((level, bits.iter().map(|b| b.to_string()).collect::<String>()))
        })
        .collect::<polyqubit::Result<Vec<_>>>()?;
    let edges: Vec<(String, Vec<(usize, usize)>)> = hypercube_edges(p)?
        .into_iter()
        .map(|(l, e)| (l.to_string(), e))
        .collect();
    match format {
        Format::Json => {
            let listing = EncodingListing {
                qubits_per_atom: p,
                labels,
                levels,
                edges,
            };
            println!("{}", serde_json::to_string_pretty(&listing)?);
        }
        Format::Csv => {
            println!("level,{}", labels.join(""));
            for (level, bits) in &levels {
                println!("{level},|{bits}>");
            }
            for (label, pairs) in &edges {
                let list: Vec<String> = pairs.iter().map(|(m, n)| format!("{m}-{n}")).collect();
                println!("{label}: {}", list.join(" "));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

struct Prepared {
    config: RunConfig,
    out_dir: PathBuf,
    format: Format,
    hash: String,
}

fn prepare(args: &RunArgs, allowed: &[Experiment], subcommand: &str) -> anyhow::Result<Prepared> {
    let mut config = RunConfig::load(&args.config)?;
    if let Some(seeds) = args.seeds {
        config.spec.seeds = seeds;
    }
    if !allowed.contains(&config.spec.experiment) {
        return Err(ConfigError(format!(
            "field `experiment`: {:?} is not handled by `{subcommand}`",
            config.spec.experiment
        ))
        .into());
    }
    config
        .spec
        .validate()
        .map_err(|e| ConfigError(e.to_string()))?;
    let out_dir = args
        .out
        .clone()
        .or_else(|| config.output.dir.clone())
        .unwrap_or_else(|| PathBuf::from("out"));
    fs::create_dir_all(&out_dir)
        .map_err(|e| ConfigError(format!("output directory {}: {e}", out_dir.display())))?;
    let format = args.format.or(config.output.format).unwrap_or(Format::Csv);
    let hash = spec_hash(&config.spec);
    Ok(Prepared {
        config,
        out_dir,
        format,
        hash,
    })
}

fn stem(experiment: Experiment) -> &'static str {
    match experiment {
        Experiment::XxPopulation => "xx_population",
        Experiment::XxRabiMismatch => "xx_rabi_mismatch",
        Experiment::ZzPhaseSpace => "zz_phase_space",
        Experiment::ZzPhaseMismatch => "zz_phase_mismatch",
    }
}

fn write_file(path: &Path, write: impl FnOnce(&mut Vec<u8>) -> std::io::Result<()>) -> anyhow::Result<()> {
    let mut buf = Vec::new();
    write(&mut buf)?;
    fs::File::create(path)
        .and_then(|mut f| f.write_all(&buf))
        .with_context(|| format!("writing {}", path.display()))?;
    println!("wrote {}", path.display());
    Ok(())
}

/// Writes `<stem>.csv` plus `<stem>.meta.json`, or a single `<stem>.json`.
fn emit<T: Serialize>(
    prep: &Prepared,
    meta: &RunMetadata,
    data: &T,
    csv: impl FnOnce(&mut Vec<u8>) -> std::io::Result<()>,
) -> anyhow::Result<()> {
    let name = stem(prep.config.spec.experiment);
    match prep.format {
        Format::Csv => {
            write_file(&prep.out_dir.join(format!("{name}.csv")), csv)?;
            write_file(&prep.out_dir.join(format!("{name}.meta.json")), |w| {
                serde_json::to_writer_pretty(&mut *w, meta)?;
                writeln!(w)
            })
        }
        Format::Json => write_file(&prep.out_dir.join(format!("{name}.json")), |w| {
            serde_json::to_writer_pretty(&mut *w, &serde_json::json!({ "metadata": meta, "data": data }))?;
            writeln!(w)
        }),
    }
}

fn numerical(e: polyqubit::Error) -> anyhow::Error {
    RunFailure(e.to_string()).into()
}

fn evolve(args: &RunArgs) -> anyhow::Result<ExitCode> {
    let prep = prepare(args, &[Experiment::XxPopulation, Experiment::ZzPhaseSpace], "evolve")?;
    let spec = &prep.config.spec;
    let start = Instant::now();
    match spec.experiment {
        Experiment::XxPopulation => {
            let trace = run_population_trace(spec).map_err(numerical)?;
            let meta = RunMetadata::new(spec, &prep.hash, start.elapsed().as_secs_f64());
            emit(&prep, &meta, &trace, |w| write_trace_csv(w, &prep.hash, &trace))?;
        }
        _ => {
            let runs = run_phase_space(spec).map_err(numerical)?;
            let meta = RunMetadata::new(spec, &prep.hash, start.elapsed().as_secs_f64());
            emit(&prep, &meta, &runs, |w| write_phase_space_csv(w, &prep.hash, &runs))?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn sweep(args: &RunArgs) -> anyhow::Result<ExitCode> {
    let prep = prepare(args, &[Experiment::XxRabiMismatch, Experiment::ZzPhaseMismatch], "sweep")?;
    let spec = &prep.config.spec;
    let start = Instant::now();
    let outcome = run_sweep(spec).map_err(numerical)?;
    let mut meta = RunMetadata::new(spec, &prep.hash, start.elapsed().as_secs_f64());
    meta.bell_target = Some(outcome.bell_target.amplitudes().iter().map(|z| [z.re, z.im]).collect());
    emit(&prep, &meta, &outcome.records, |w| write_sweep_csv(w, &prep.hash, &outcome.records))?;

    let failed = outcome.records.iter().filter(|r| r.failed()).count();
    for r in outcome.records.iter().filter(|r| r.n_failures > 0) {
        eprintln!(
            "warning: parameter {} had {}/{} failed seeds: {}",
            r.parameter, r.n_failures, r.n_seeds, r.reason
        );
    }
    if failed == outcome.records.len() {
        eprintln!("error: every sweep point failed");
        return Ok(ExitCode::from(1));
    }
    Ok(ExitCode::SUCCESS)
}
