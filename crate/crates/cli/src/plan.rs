//! `plan`: compute and print an optimal plan.

use std::path::PathBuf;

use anyhow::Context;
use clap::{Args, ValueEnum};
use pulse_seek::{
    compare_strategies, dichotomy_plan, optimize_ladder, periodic_load_profile, periodic_mean_time,
    plan_multistage, trichotomy_plan, uniform_multistep_ladder, ApertureLadder, DensityKind, LoadProfile,
    PriorDensity, StrategyComparison, UniformLadderPlan,
};
use serde::Serialize;

use crate::format::print_json;
use crate::{usage, Failure, Outcome};

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Family {
    /// One source, one receiver.
    Single,
    /// The first of `n` identical sources, one receiver.
    MultiTarget,
    /// One source, `n` receivers.
    MultiReceiver,
}

#[derive(Args, Debug)]
pub struct PlanArgs {
    #[arg(long, value_enum)]
    family: Family,
    /// Number of sources (multi-target) or receivers (multi-receiver).
    #[arg(long)]
    n: Option<usize>,
    /// Length of the search interval.
    #[arg(long = "L", default_value_t = 1.0)]
    length: f64,
    /// Required localization accuracy, in the same units as --L.
    #[arg(long)]
    epsilon: f64,
    /// Pulse intensity of each source.
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
    /// JSON prior density (single family only); uniform when omitted.
    #[arg(long)]
    prior_file: Option<PathBuf>,
}

#[derive(Serialize)]
struct SectionSummary {
    arity: usize,
    depth: usize,
    final_width: f64,
    mean_time: f64,
}

#[derive(Serialize)]
struct SinglePlan {
    family: &'static str,
    interval_length: f64,
    epsilon: f64,
    lambda: f64,
    prior: PriorDensity,
    /// One-step periodic load and its mean time.
    periodic_load: LoadProfile,
    periodic_mean_time: f64,
    /// Constant-ratio multistep ladder (uniform prior only).
    #[serde(skip_serializing_if = "Option::is_none")]
    uniform_ladder: Option<UniformLadderPlan>,
    #[serde(skip_serializing_if = "Option::is_none")]
    comparison: Option<StrategyComparison>,
    dichotomy: SectionSummary,
    trichotomy: SectionSummary,
}

#[derive(Serialize)]
struct MultiTargetPlan {
    family: &'static str,
    n: usize,
    interval_length: f64,
    epsilon: f64,
    lambda: f64,
    m: usize,
    ladder: ApertureLadder,
    mean_time: f64,
    lambda_tau: f64,
}

fn read_prior(path: &PathBuf) -> Result<PriorDensity, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage("--prior-file", format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| usage("--prior-file", format!("{}: {e}", path.display())))
}

fn require_n(n: Option<usize>) -> Result<usize, Failure> {
    match n {
        Some(n) if n >= 1 => Ok(n),
        Some(n) => Err(usage("--n", format!("must be at least 1, got {n}"))),
        None => Err(usage("--n", "required for this family")),
    }
}

pub fn run(args: PlanArgs) -> Outcome {
    if !(args.length.is_finite() && args.length > 0.0) {
        return Err(usage("--L", format!("NonPositiveLength: must be positive, got {}", args.length)));
    }
    if !(args.lambda.is_finite() && args.lambda > 0.0) {
        return Err(usage("--lambda", format!("NonPositiveLambda: must be positive, got {}", args.lambda)));
    }
    if !(args.epsilon > 0.0 && args.epsilon < args.length) {
        return Err(usage(
            "--epsilon",
            format!("EpsilonOutOfRange: {} must lie strictly inside (0, {})", args.epsilon, args.length),
        ));
    }
    if args.prior_file.is_some() && !matches!(args.family, Family::Single) {
        return Err(usage("--prior-file", "only the single family accepts a prior"));
    }
    match args.family {
        Family::Single => single(&args),
        Family::MultiTarget => multi_target(&args),
        Family::MultiReceiver => {
            let n = require_n(args.n)?;
            let plan = plan_multistage(n, args.length, args.epsilon, args.lambda)?;
            print_json(&plan)
        }
    }
}

fn single(args: &PlanArgs) -> Outcome {
    let (l, eps, lambda) = (args.length, args.epsilon, args.lambda);
    let prior = match &args.prior_file {
        Some(path) => read_prior(path)?,
        None => PriorDensity::uniform(l)?,
    };
    if (prior.length() - l).abs() > 1e-12 * l.max(1.0) {
        return Err(usage("--prior-file", format!("prior ends at {} but --L is {l}", prior.length())));
    }
    let uniform = prior.kind() == DensityKind::Uniform;
    let periodic_load = periodic_load_profile(&prior, eps)?;
    let periodic_time = periodic_mean_time(&prior, &periodic_load, lambda)?;
    let section = |arity: usize| -> Result<SectionSummary, Failure> {
        let plan = if arity == 2 { dichotomy_plan(&prior, l, eps)? } else { trichotomy_plan(&prior, l, eps)? };
        Ok(SectionSummary {
            arity,
            depth: plan.depth(),
            final_width: plan.final_width(),
            mean_time: plan.expected_time(lambda),
        })
    };
    let out = SinglePlan {
        family: "single",
        interval_length: l,
        epsilon: eps,
        lambda,
        periodic_load,
        periodic_mean_time: periodic_time,
        uniform_ladder: if uniform { Some(uniform_multistep_ladder(l, eps, lambda)?) } else { None },
        comparison: if uniform { Some(compare_strategies(l, eps, lambda)?) } else { None },
        dichotomy: section(2)?,
        trichotomy: section(3)?,
        prior,
    };
    print_json(&out)
}

fn multi_target(args: &PlanArgs) -> Outcome {
    let n = require_n(args.n)?;
    let solution = optimize_ladder(n, args.epsilon / args.length)?;
    let ladder = solution
        .ladder
        .scaled(args.length)
        .context("scaling the unit-circle ladder to the interval length")?;
    print_json(&MultiTargetPlan {
        family: "multi-target",
        n,
        interval_length: args.length,
        epsilon: args.epsilon,
        lambda: args.lambda,
        m: solution.m,
        ladder,
        mean_time: solution.mean_time / args.lambda,
        lambda_tau: solution.mean_time,
    })
}
