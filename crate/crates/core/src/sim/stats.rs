//! Aggregation of trials into [`TrialStats`].

use crate::error::Result;
use crate::model::TrialStats;
use crate::stream::{fold_trials, Moments, TrialStreams};

use super::{simulate, Scenario};

/// z-value of the two-sided normal 95% interval.
const Z95: f64 = 1.959_963_984_540_054;

#[derive(Default)]
struct Acc {
    times: Moments,
    pulses: Vec<u64>,
    registrations: Vec<u64>,
}

fn add(into: &mut Vec<u64>, from: &[u64]) {
    if into.len() < from.len() {
        into.resize(from.len(), 0);
    }
    into.iter_mut().zip(from).for_each(|(a, b)| *a += b);
}

/// Runs every trial of `scenario` and summarizes the elapsed times.
///
/// Trial `i` always draws from stream `i` of the scenario seed, and partial
/// sums are merged in trial order, so the result does not depend on the
/// number of worker threads.
pub fn run_trials(scenario: &Scenario) -> Result<TrialStats> {
    let streams = TrialStreams::new(scenario.seed);
    let acc = fold_trials(
        scenario.trials,
        Acc::default,
        |acc, i| {
            let trace = simulate(scenario, &streams, i, false)?;
            acc.times.push(trace.elapsed);
            add(&mut acc.pulses, &trace.stage_pulses);
            add(&mut acc.registrations, &trace.stage_registrations);
            Ok(())
        },
        |mut a, b| {
            a.times = a.times.merge(b.times);
            add(&mut a.pulses, &b.pulses);
            add(&mut a.registrations, &b.registrations);
            a
        },
    )?;
    let stderr = acc.times.stderr();
    Ok(TrialStats {
        trials: acc.times.count,
        mean: acc.times.mean,
        stderr,
        ci95: Z95 * stderr,
        stage_pulses: acc.pulses,
        stage_registrations: acc.registrations,
    })
}
