//! `wronski`: bound states, characteristic-function scans, saturation
//! profiles and oracle comparisons as CSV.

mod commands;
mod config;
mod inline;
mod table;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use config::{Config, ConfigError, Settings};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(#[from] ConfigError),
    #[error("solver failure: {0}")]
    Solver(String),
    #[error("cannot access {0}: {1}")]
    Io(String, #[source] std::io::Error),
}

impl CliError {
    /// Errors that mean the request itself was inconsistent count as
    /// configuration errors; the rest are solver failures.
    fn core(e: wronski::Error) -> Self {
        use wronski::Error as E;
        match e {
            E::InvalidGrid(_)
            | E::InvalidPotential(_)
            | E::InvalidProblem(_)
            | E::InvalidArgument(_)
            | E::NotSymmetric
            | E::NotDirichlet => CliError::Config(ConfigError::Problem(e)),
            other => CliError::Solver(other.to_string()),
        }
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 1,
            CliError::Solver(_) => 2,
            CliError::Io(..) => 3,
        }
    }
}

#[derive(Parser)]
#[command(name = "wronski", version, about = "Bound states of the 1D Schrödinger equation by Wronskian matching")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Eigenvalues, node counts and errors against closed forms.
    Solve(Run),
    /// Characteristic functions tabulated over an energy window.
    Scan(Run),
    /// Canonical functions, endpoint Wronskians and both ratios along the grid.
    Saturate(Run),
    /// Engine against shooting and finite-difference references over a step ladder.
    Oracle(Run),
}

#[derive(Args)]
struct Run {
    /// `key = value` file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output path (default standard output).
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    settings: Settings,
}

fn write(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Io(p.display().to_string(), e)),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CliError::Io("standard output".into(), e))
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let (run, action): (Run, fn(&Config) -> Result<commands::Output, CliError>) = match cli.command {
        Command::Solve(r) => (r, commands::solve),
        Command::Scan(r) => (r, commands::scan),
        Command::Saturate(r) => (r, commands::saturate),
        Command::Oracle(r) => (r, commands::oracle),
    };
    let file = match &run.config {
        Some(p) => Settings::from_file(p)?,
        None => Settings::default(),
    };
    let cfg = Config::resolve(run.settings.over(file))?;
    let out = action(&cfg)?;
    write(run.out.as_deref(), &out.csv)?;
    if let Some((path, text)) = &out.side {
        write(Some(path), text)?;
    }
    match out.failure {
        Some(msg) => Err(CliError::Solver(msg)),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("wronski: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
