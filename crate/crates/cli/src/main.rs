//! `pulse-seek`: plans, simulations, table reproduction and self-checks.
//!
//! Results go to stdout as JSON or CSV; diagnostics go to stderr. Exit code
//! 2 marks a usage problem (bad flag value, unreadable input file), 1 a
//! failure reported by a planner, the simulator or a verification check.

mod format;
mod plan;
mod simulate;
mod table;
mod verify;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::plan::PlanArgs;
use crate::simulate::SimulateArgs;
use crate::table::TableArgs;
use crate::verify::VerifyArgs;

/// Environment variable capping the number of worker threads.
const THREADS_ENV: &str = "PULSE_SEEK_THREADS";

#[derive(Parser)]
#[command(name = "pulse-seek", version, about = "Time-optimal search for Poisson pulsed point sources")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute an optimal search plan and print it as JSON.
    Plan(PlanArgs),
    /// Run a scenario file through the simulator and print trial statistics.
    Simulate(SimulateArgs),
    /// Print a table of optimal plans as CSV.
    Table(TableArgs),
    /// Cross-check the analytic formulas against independent oracles.
    Verify(VerifyArgs),
}

/// A failure together with the exit code it maps to.
#[derive(Debug)]
pub enum Failure {
    /// Bad flag value or unusable input; exit 2.
    Usage(String),
    /// A planner, simulator or check reported an error; exit 1.
    Run(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Run(e)
    }
}

impl From<pulse_seek::Error> for Failure {
    fn from(e: pulse_seek::Error) -> Self {
        Failure::Run(anyhow::anyhow!("{}: {e}", e.name()))
    }
}

pub type Outcome = Result<(), Failure>;

pub fn usage(flag: &str, msg: impl std::fmt::Display) -> Failure {
    Failure::Usage(format!("{flag}: {msg}"))
}

fn configure_threads() -> Outcome {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|t| *t > 0)
        .ok_or_else(|| usage(THREADS_ENV, format!("expected a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::Run(anyhow::anyhow!("thread pool: {e}")))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| match cli.command {
        Command::Plan(args) => plan::run(args),
        Command::Simulate(args) => simulate::run(args),
        Command::Table(args) => table::run(args),
        Command::Verify(args) => verify::run(args),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Run(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
