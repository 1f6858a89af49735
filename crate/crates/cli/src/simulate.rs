//! `simulate`: run a scenario file through the simulator.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use anyhow::Context;
use clap::{Args, ValueEnum};
use pulse_seek::{run_trial, run_trials, Scenario, SimMode};

use crate::format::print_json;
use crate::{usage, Failure, Outcome};

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Mode {
    /// Window offset uniform at every pulse.
    Thinning,
    /// Window swept at constant speed in time.
    Literal,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    /// Scenario JSON (source model, plan, trials, seed).
    #[arg(long)]
    scenario_file: PathBuf,
    /// Override the scenario's trial count.
    #[arg(long)]
    trials: Option<u64>,
    /// Override the scenario's seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the window realization.
    #[arg(long, value_enum)]
    mode: Option<Mode>,
    /// Write the pulse events of the first trials to this CSV file.
    #[arg(long)]
    trace_csv: Option<PathBuf>,
    /// Number of trials traced with --trace-csv.
    #[arg(long, default_value_t = 100)]
    trace_trials: u64,
}

pub fn run(args: SimulateArgs) -> Outcome {
    let path = &args.scenario_file;
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage("--scenario-file", format!("cannot read {}: {e}", path.display())))?;
    let mut scenario: Scenario = serde_json::from_str(&text)
        .map_err(|e| usage("--scenario-file", format!("{}: {e}", path.display())))?;
    if let Some(trials) = args.trials {
        if trials == 0 {
            return Err(usage("--trials", "must be at least 1"));
        }
        scenario.trials = trials;
    }
    if let Some(seed) = args.seed {
        scenario.seed = seed;
    }
    if let Some(mode) = args.mode {
        scenario.mode = match mode {
            Mode::Thinning => SimMode::Thinning,
            Mode::Literal => SimMode::Literal,
        };
    }
    let scenario = scenario.validate()?;
    if let Some(trace) = &args.trace_csv {
        write_traces(&scenario, trace, args.trace_trials.min(scenario.trials))?;
    }
    let stats = run_trials(&scenario)?;
    print_json(&stats)
}

fn write_traces(scenario: &Scenario, path: &PathBuf, trials: u64) -> Outcome {
    let file = File::create(path).map_err(|e| usage("--trace-csv", format!("{}: {e}", path.display())))?;
    let mut out = BufWriter::new(file);
    let io = |e: std::io::Error| Failure::Run(anyhow::Error::new(e).context("writing the trace CSV"));
    writeln!(out, "trial,time,position,registered,stage,window_start,window_width").map_err(io)?;
    for i in 0..trials {
        let trace = run_trial(scenario, i)?;
        for ev in &trace.events {
            writeln!(
                out,
                "{i},{},{},{},{},{},{}",
                ev.time,
                ev.position,
                u8::from(ev.registered),
                ev.stage,
                ev.window_start,
                ev.window_width
            )
            .map_err(io)?;
        }
    }
    out.flush().context("flushing the trace CSV")?;
    Ok(())
}
