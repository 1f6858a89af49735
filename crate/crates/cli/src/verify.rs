//! `verify`: oracle cross-checks with a JSON pass/fail report.

use anyhow::anyhow;
use clap::{Args, ValueEnum};
use pulse_seek::{
    boundary_continuity, composition_invariance_check, mc_count_distribution, mc_region_probability,
    prob_k_in_aperture,
};
use serde::Serialize;

use crate::format::print_json;
use crate::{usage, Failure, Outcome};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    /// In-aperture count law against two Monte Carlo estimators.
    Prob24,
    /// Count law composition across two narrowing steps.
    Composition,
    /// Continuity of the multi-receiver mean time across regime boundaries.
    Boundaries,
    All,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Suite::All)]
    suite: Suite,
    /// Monte Carlo trials per estimate.
    #[arg(long, default_value_t = 1_000_000)]
    trials: u64,
    #[arg(long, default_value_t = 7)]
    seed: u64,
}

const SIGMAS: f64 = 3.0;
const COMPOSITION_TOL: f64 = 1e-12;
const BOUNDARY_TOL: f64 = 1e-9;

#[derive(Serialize)]
struct Check {
    suite: Suite,
    name: String,
    observed: f64,
    expected: f64,
    tolerance: f64,
    pass: bool,
}

#[derive(Serialize)]
struct VerifyReport {
    suite: Suite,
    trials: u64,
    seed: u64,
    passed: bool,
    failures: usize,
    checks: Vec<Check>,
}

fn push(out: &mut Vec<Check>, suite: Suite, name: String, observed: f64, expected: f64, tolerance: f64) {
    let pass = (observed - expected).abs() <= tolerance;
    out.push(Check { suite, name, observed, expected, tolerance, pass });
}

fn prob24(trials: u64, seed: u64, out: &mut Vec<Check>) -> Result<(), Failure> {
    for n in [2usize, 3, 5, 8] {
        for (li, l) in [0.1, 0.3, 0.5, 0.7].into_iter().enumerate() {
            let cell_seed = seed.wrapping_add(100 * n as u64 + li as u64);
            let sim = mc_count_distribution(n, l, trials, cell_seed)?;
            for k in 1..=n {
                let exact = prob_k_in_aperture(n, k, l)?;
                let est = &sim[k - 1];
                let sigma = est.stderr.max((exact * (1.0 - exact) / trials as f64).sqrt());
                push(out, Suite::Prob24, format!("simulated n={n} k={k} l={l}"), est.value, exact, SIGMAS * sigma);
                if n <= 4 {
                    let region = mc_region_probability(n, k, l, trials, cell_seed.wrapping_add(50))?;
                    let name = format!("region n={n} k={k} l={l}");
                    push(out, Suite::Prob24, name, region.value, exact, SIGMAS * region.stderr);
                }
            }
        }
    }
    Ok(())
}

fn composition(out: &mut Vec<Check>) -> Result<(), Failure> {
    // 20 source counts x 25 aperture pairs = 500 cases.
    for n in 1..=20 {
        for l1 in [0.9, 0.7, 0.5, 0.3, 0.1] {
            for f in [0.9, 0.6, 0.4, 0.2, 0.05] {
                let check = composition_invariance_check(n, l1, l1 * f)?;
                let name = format!("n={n} l1={l1} l2={}", l1 * f);
                push(out, Suite::Composition, name, check.max_abs_diff(), 0.0, COMPOSITION_TOL);
            }
        }
    }
    Ok(())
}

fn boundaries(out: &mut Vec<Check>) -> Result<(), Failure> {
    for n in 1..=4 {
        for b in boundary_continuity(n, 6)? {
            let name = format!(
                "n={n} eps/L={:.6e}: M={} {:?} | M={} {:?}",
                b.ratio, b.above.0, b.above.1, b.below.0, b.below.1
            );
            push(out, Suite::Boundaries, name, b.time_above, b.time_below, BOUNDARY_TOL);
        }
    }
    Ok(())
}

pub fn run(args: VerifyArgs) -> Outcome {
    if args.trials == 0 {
        return Err(usage("--trials", "must be at least 1"));
    }
    let mut checks = Vec::new();
    let wants = |s: Suite| args.suite == Suite::All || args.suite == s;
    if wants(Suite::Prob24) {
        prob24(args.trials, args.seed, &mut checks)?;
    }
    if wants(Suite::Composition) {
        composition(&mut checks)?;
    }
    if wants(Suite::Boundaries) {
        boundaries(&mut checks)?;
    }
    let failures = checks.iter().filter(|c| !c.pass).count();
    print_json(&VerifyReport {
        suite: args.suite,
        trials: args.trials,
        seed: args.seed,
        passed: failures == 0,
        failures,
        checks,
    })?;
    if failures > 0 {
        return Err(Failure::Run(anyhow!("{failures} verification check(s) failed")));
    }
    Ok(())
}
