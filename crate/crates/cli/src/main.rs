use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use qas_core::harness::{run_experiment, ExperimentConfig, ExperimentKind, RunManifest, RunOptions};

/// Time-evolved-basis dynamics experiments.
#[derive(Debug, Parser)]
#[command(name = "qas", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Observable trajectories: oracle, exact-mode and shot-sampled.
    Dynamics(RunArgs),
    /// Across-seed variance against shot count.
    VarianceScan(RunArgs),
    /// Final-time infidelity against Trotter steps in the basis.
    TrotterScan(RunArgs),
    /// Standard versus time-evolved-basis cost table.
    ResourceTable(RunArgs),
    /// Overlap-matrix conditioning for candidate parameter times.
    LindepReport(RunArgs),
    /// Recompute output checksums against a run manifest.
    Verify {
        /// Output directory holding manifest.json.
        #[arg(long)]
        dir: PathBuf,
    },
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Experiment config (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Master seed, overriding `shots.seed`.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (0 = one per core).
    #[arg(long)]
    workers: Option<usize>,
    /// Output directory, overriding the config and QAS_OUT_DIR.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn run(kind: ExperimentKind, args: RunArgs) -> Result<()> {
    let (cfg, bytes) =
        ExperimentConfig::load(&args.config).with_context(|| format!("loading {}", args.config.display()))?;
    if cfg.kind != kind {
        bail!("{} describes a {} experiment, not {}", args.config.display(), cfg.kind, kind);
    }
    let opts = RunOptions { seed: args.seed, workers: args.workers, out_dir: args.out, config_bytes: Some(bytes) };
    let outcome = run_experiment(&cfg, &opts).with_context(|| format!("running {}", cfg.name()))?;
    println!("{} -> {}", cfg.name(), outcome.dir.display());
    for (file, sum) in &outcome.manifest.outputs {
        println!("  {file}  sha256:{sum}");
    }
    println!("  wall clock {:.2}s", outcome.manifest.wall_clock_seconds);
    Ok(())
}

fn verify(dir: PathBuf) -> Result<bool> {
    let manifest = RunManifest::read(&dir)?;
    let bad = manifest.verify(&dir);
    if bad.is_empty() {
        println!("{}: {} outputs match", dir.display(), manifest.outputs.len());
        return Ok(true);
    }
    for f in &bad {
        eprintln!("checksum mismatch: {f}");
    }
    Ok(false)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Dynamics(a) => run(ExperimentKind::Dynamics, a).map(|_| true),
        Command::VarianceScan(a) => run(ExperimentKind::VarianceScan, a).map(|_| true),
        Command::TrotterScan(a) => run(ExperimentKind::TrotterScan, a).map(|_| true),
        Command::ResourceTable(a) => run(ExperimentKind::ResourceTable, a).map(|_| true),
        Command::LindepReport(a) => run(ExperimentKind::LindepReport, a).map(|_| true),
        Command::Verify { dir } => verify(dir),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
