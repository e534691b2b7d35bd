//! `logpot <command> --job <file> [--out <dir>] [--seed N] [--threads N]`
//!
//! Exit status: 0 success, 2 unreadable or invalid job, 3 solver failure,
//! 4 self-test failure, 1 anything else.

mod commands;
mod job;
mod report;
mod selftest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use thiserror::Error;

use job::{Command, JobSpec};

/// Environment variable holding the default worker count.
const THREADS_ENV: &str = "LOGPOT_THREADS";

#[derive(Debug, Parser)]
#[command(name = "logpot", version, about = "Equilibrium measures, free functional inequalities and log-gas sampling")]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// Job document (TOML); optional for `selftest`.
    #[arg(long)]
    job: Option<PathBuf>,
    /// Output directory for report.toml and CSV tables.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed of the first sampler chain, overriding the job.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads; defaults to LOGPOT_THREADS, then the core count.
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid job: {0}")]
    Parse(String),
    #[error("solver failure: {0}")]
    Solver(#[from] logpot_core::Error),
    #[error("self-test failed: {0} checks")]
    Selftest(usize),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Other(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Solver(_) => 3,
            CliError::Selftest(_) => 4,
            CliError::Io(_) | CliError::Other(_) => 1,
        }
    }
}

fn threads(cli: &Cli) -> Result<Option<usize>, CliError> {
    if let Some(n) = cli.threads {
        return Ok(Some(n));
    }
    match std::env::var(THREADS_ENV) {
        Ok(s) if !s.trim().is_empty() => s
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| CliError::Parse(format!("{THREADS_ENV} must be a positive integer, got {s:?}"))),
        _ => Ok(None),
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    if let Some(n) = threads(cli)? {
        if n == 0 {
            return Err(CliError::Parse("thread count must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Other(e.to_string()))?;
    }
    let mut job = match &cli.job {
        Some(path) => JobSpec::load(path)?,
        None if cli.command == Command::Selftest => JobSpec::default(),
        None => return Err(CliError::Parse("--job is required".into())),
    };
    job.validate(cli.command)?;
    if let (Some(seed), Some(gas)) = (cli.seed, job.gas.as_mut()) {
        gas.seed = Some(seed);
    }
    let dir = cli
        .out
        .clone()
        .or_else(|| job.out.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&dir)?;

    let mut selftest_failures = 0;
    let results = match cli.command {
        Command::Solve => commands::solve_cmd(&job, &dir)?,
        Command::Energy => commands::energy_cmd(&job)?,
        Command::Poincare => commands::poincare_cmd(&job, &dir)?,
        Command::Deficit => commands::deficit_cmd(&job)?,
        Command::Perturb => commands::perturb_cmd(&job)?,
        Command::Sample => commands::sample_cmd(&job, &dir, cli.seed)?,
        Command::Selftest => {
            let (r, failed) = selftest::run();
            selftest_failures = failed;
            r
        }
    };
    report::write_report(&dir, cli.command, &job, &results)?;
    if selftest_failures > 0 {
        return Err(CliError::Selftest(selftest_failures));
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("logpot: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
