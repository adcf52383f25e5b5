//! `fkpp`: bifurcation-analysis experiments for the doubly-nonlocal
//! Fisher-KPP equation. Reads a JSON config, runs the requested pipeline,
//! and writes deterministic CSV/JSON artifacts plus a run manifest.

mod commands;
mod config;

use clap::{Parser, Subcommand};
use commands::{CliError, Context};
use config::ExperimentConfig;
use sha2::{Digest, Sha256};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(name = "fkpp", version, about = "Doubly-nonlocal Fisher-KPP bifurcation toolkit")]
struct Cli {
    /// JSON experiment configuration
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory for artifacts and the manifest
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Worker threads for sweeps (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// RNG seed for randomized initial data (overrides the config's seed)
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Print stage progress to stderr
    #[arg(long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Dispersion curve and assumption report for explicit kernels
    Analyze,
    /// Solve the tangency point (h_c, k_c) of a kernel family
    Critical,
    /// Continue the stationary pattern branch over an eps grid
    Branch,
    /// Spectrum of the linearization at a branch point
    Stability,
    /// Time-integrate a perturbation of the homogeneous state
    Evolve,
    /// Local-diffusion scaling limit convergence table
    Limit,
    /// Uniqueness/nonexistence certificates around theta
    Uniqueness,
    /// Parallel (m, h) parameter sweep of the dispersion maximum
    Sweep,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Analyze => "analyze",
            Command::Critical => "critical",
            Command::Branch => "branch",
            Command::Stability => "stability",
            Command::Evolve => "evolve",
            Command::Limit => "limit",
            Command::Uniqueness => "uniqueness",
            Command::Sweep => "sweep",
        }
    }
}

fn prepare(cli: &Cli) -> Result<(Context, String), CliError> {
    let config_path = cli
        .config
        .as_ref()
        .ok_or_else(|| CliError::Config("--config PATH is required".into()))?;
    let text = std::fs::read_to_string(config_path)
        .map_err(|e| CliError::Config(format!("{}: {e}", config_path.display())))?;
    let sha = hex::encode(Sha256::digest(text.as_bytes()));
    let cfg = ExperimentConfig::parse(&text).map_err(CliError::Config)?;
    if let Some(n) = cli.threads {
        // a second initialization in the same process is harmless
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    let base_dir = config_path
        .parent()
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("."));
    let seed = cli.seed.or(cfg.seed).unwrap_or(0);
    let ctx = Context::new(cfg, base_dir, cli.out.clone(), seed, cli.verbose)?;
    Ok((ctx, sha))
}

mod hex {
    pub fn encode(bytes: impl AsRef<[u8]>) -> String {
        bytes.as_ref().iter().map(|b| format!("{b:02x}")).collect()
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let (mut ctx, sha) = match prepare(&cli) {
        Ok(v) => v,
        Err(CliError::Config(msg)) => {
            eprintln!("config error: {msg}");
            return ExitCode::from(2);
        }
        Err(CliError::Solver { stage, message }) => {
            eprintln!("solver failure in stage `{stage}`: {message}");
            return ExitCode::from(3);
        }
    };
    let result = commands::run(&mut ctx, cli.command.name());
    // the manifest is written even when a pipeline stage fails
    ctx.write_manifest(cli.command.name(), &sha, start.elapsed().as_millis());
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Config(msg)) => {
            eprintln!("config error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Solver { stage, message }) => {
            eprintln!("solver failure in stage `{stage}`: {message}");
            ExitCode::from(3)
        }
    }
}
