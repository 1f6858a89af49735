//! Single source, single receiver strategies.
//!
//! * periodic one-step search: constant relative load per cell, obtained by a
//!   Lagrange multiplier with clamping at full load;
//! * general one-step search: cumulative load `α(x, t)` with a time-varying
//!   multiplier `μ(t)` found by bisection;
//! * multistep search for a uniform prior: constant-ratio aperture ladders;
//! * recursive k-section (dichotomy, trichotomy) for arbitrary priors.

use serde::{Deserialize, Serialize};

use crate::error::{check_epsilon, Error, Result};
use crate::model::{ApertureLadder, CumulativeLoad, LoadProfile, PriorDensity};

/// Optimal periodic load `φ ∝ √f`, clamped at `φ = 1`.
///
/// Each round recomputes the normalizer over the unclamped cells with the
/// budget left after the clamped ones; the clamped set only grows, so the
/// loop ends after at most one round per cell.
pub fn periodic_load_profile(prior: &PriorDensity, epsilon: f64) -> Result<LoadProfile> {
    check_epsilon(epsilon, prior.length())?;
    let widths = prior.widths();
    let roots: Vec<f64> = prior.values().iter().map(|f| f.sqrt()).collect();
    let cells = widths.len();
    let mut phi = vec![0.0; cells];
    let mut clamped = vec![false; cells];

    loop {
        let clamped_width: f64 = (0..cells).filter(|&i| clamped[i]).map(|i| widths[i]).sum();
        let budget = epsilon - clamped_width;
        let norm: f64 =
            (0..cells).filter(|&i| !clamped[i]).map(|i| roots[i] * widths[i]).sum();
        if norm <= 0.0 {
            // Every cell with mass is saturated; park the rest of the budget
            // on zero-density cells, where it does not change the mean time.
            let idle: f64 = (0..cells).filter(|&i| !clamped[i]).map(|i| widths[i]).sum();
            for i in (0..cells).filter(|&i| !clamped[i]) {
                phi[i] = if idle > 0.0 { (budget / idle).clamp(0.0, 1.0) } else { 0.0 };
            }
            break;
        }
        let mut newly_clamped = false;
        for i in 0..cells {
            if clamped[i] {
                continue;
            }
            phi[i] = budget * roots[i] / norm;
            if phi[i] > 1.0 {
                phi[i] = 1.0;
                clamped[i] = true;
                newly_clamped = true;
            }
        }
        if !newly_clamped {
            break;
        }
    }
    LoadProfile::new(prior.breakpoints().to_vec(), phi)
}

/// Mean time to the first registered pulse under a periodic load.
///
/// Cells with zero prior density contribute nothing; a cell with mass but no
/// load makes the mean time infinite.
pub fn periodic_mean_time(prior: &PriorDensity, profile: &LoadProfile, lambda: f64) -> Result<f64> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::NonPositiveLambda(lambda));
    }
    let grid = profile.grid();
    if grid.len() != prior.breakpoints().len()
        || grid.iter().zip(prior.breakpoints()).any(|(a, b)| (a - b).abs() > 1e-12 * b.abs().max(1.0))
    {
        return Err(Error::GridMismatch);
    }
    let mut total = 0.0;
    for ((f, w), phi) in prior.values().iter().zip(prior.widths()).zip(profile.phi()) {
        if *f > 0.0 {
            if *phi <= 0.0 {
                return Ok(f64::INFINITY);
            }
            total += f * w / phi;
        }
    }
    Ok(total / lambda)
}

/// Cyclic visiting weights `β_j = √P_j / Σ √P_j` for discrete cell masses.
pub fn discrete_beta_weights(masses: &[f64]) -> Result<Vec<f64>> {
    if let Some((index, &value)) =
        masses.iter().enumerate().find(|(_, m)| !(m.is_finite() && **m >= 0.0))
    {
        return Err(Error::NegativeMass { index, value });
    }
    let total: f64 = masses.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::NotNormalized(total));
    }
    let roots: Vec<f64> = masses.iter().map(|m| m.sqrt()).collect();
    let norm: f64 = roots.iter().sum();
    Ok(roots.into_iter().map(|r| r / norm).collect())
}

/// Optimal cumulative load `α(x, t)` of the general one-step search.
///
/// Per cell `α = clamp(ln(λ f / μ) / λ, 0, t)`; `μ(t)` is found by bisection
/// on `ln μ` so that `Σ α·width = ε t`.
pub fn general_onestep_alpha(
    prior: &PriorDensity,
    epsilon: f64,
    lambda: f64,
    t: f64,
) -> Result<CumulativeLoad> {
    check_epsilon(epsilon, prior.length())?;
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::NonPositiveLambda(lambda));
    }
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::RootNotBracketed(format!("elapsed time {t} must be nonnegative")));
    }
    let grid = prior.breakpoints().to_vec();
    let widths = prior.widths();
    if t == 0.0 {
        return CumulativeLoad::new(grid, 0.0, vec![0.0; widths.len()]);
    }
    // ln(λ f) per cell; None for cells without mass (α stays 0 there).
    let levels: Vec<Option<f64>> =
        prior.values().iter().map(|&f| (f > 0.0).then(|| (lambda * f).ln())).collect();
    let alpha_at = |log_mu: f64| -> Vec<f64> {
        levels
            .iter()
            .map(|lvl| lvl.map_or(0.0, |l| ((l - log_mu) / lambda).clamp(0.0, t)))
            .collect()
    };
    let target = epsilon * t;
    let residual = |log_mu: f64| -> f64 {
        alpha_at(log_mu).iter().zip(&widths).map(|(a, w)| a * w).sum::<f64>() - target
    };

    let max_level = levels.iter().flatten().copied().fold(f64::NEG_INFINITY, f64::max);
    let min_level = levels.iter().flatten().copied().fold(f64::INFINITY, f64::min);
    // At `hi` nothing is loaded, at `lo` every cell with mass is loaded fully.
    let mut hi = max_level;
    let mut lo = min_level - lambda * t;
    let shortfall = -residual(lo);
    if shortfall > 0.0 {
        // Every cell with mass is loaded for the whole time; the rest of the
        // budget goes to zero-density cells, where it does not change the
        // objective.
        let idle: f64 = levels.iter().zip(&widths).filter(|(l, _)| l.is_none()).map(|(_, w)| w).sum();
        if idle * t < shortfall * (1.0 - 1e-12) {
            return Err(Error::RootNotBracketed(format!(
                "budget ε·t = {target} exceeds the loadable width times t = {}",
                target - shortfall + idle * t
            )));
        }
        let spill = (shortfall / idle).min(t);
        let alpha = levels.iter().map(|l| if l.is_some() { t } else { spill }).collect();
        return CumulativeLoad::new(grid, t, alpha);
    }
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if residual(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let log_mu = 0.5 * (lo + hi);
    let alpha = alpha_at(log_mu);
    let miss = residual(log_mu).abs();
    if miss > 1e-10 * target.max(1.0) {
        return Err(Error::RootNotBracketed(format!("budget residual {miss} after bisection")));
    }
    CumulativeLoad::new(grid, t, alpha)
}

/// Mean time `(n/λ)(L/ε)^(1/n)` of an `n`-step constant-ratio ladder.
pub fn multistep_mean_time(steps: usize, ratio: f64, lambda: f64) -> f64 {
    let n = steps as f64;
    n / lambda * ratio.powf(1.0 / n)
}

/// Optimal constant-ratio ladder for a uniform prior.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UniformLadderPlan {
    pub ladder: ApertureLadder,
    pub mean_time: f64,
}

/// Picks the step count among `⌊ln(L/ε)⌋` and `⌊ln(L/ε)⌋ + 1` with the smaller
/// mean time (ties go to fewer steps) and builds its constant-ratio ladder.
pub fn uniform_multistep_ladder(length: f64, epsilon: f64, lambda: f64) -> Result<UniformLadderPlan> {
    check_epsilon(epsilon, length)?;
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::NonPositiveLambda(lambda));
    }
    let ratio = length / epsilon;
    let base = ratio.ln().floor() as usize;
    let mut best = base.max(1);
    let mut best_time = multistep_mean_time(best, ratio, lambda);
    let next = base + 1;
    if next != best {
        let time = multistep_mean_time(next, ratio, lambda);
        if time < best_time * (1.0 - 1e-12) {
            best = next;
            best_time = time;
        }
    }
    let mut widths: Vec<f64> =
        (0..=best).map(|k| length * ratio.powf(-(k as f64) / best as f64)).collect();
    widths[0] = length;
    widths[best] = epsilon;
    Ok(UniformLadderPlan { ladder: ApertureLadder::new(widths)?, mean_time: best_time })
}

/// Mean times of the multistep families for a uniform prior and their
/// relative losses against the asymptotic optimum `(e/λ) ln(L/ε)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrategyComparison {
    pub optimal: f64,
    pub dichotomy: f64,
    pub trichotomy: f64,
    pub one_step: f64,
    pub dichotomy_loss: f64,
    pub trichotomy_loss: f64,
    pub one_step_loss: f64,
    /// Best integer-step ladder, from [`uniform_multistep_ladder`].
    pub optimal_ladder: f64,
    /// `2⌈log₂(L/ε)⌉/λ`: halving with a whole number of levels.
    pub dichotomy_realizable: f64,
    /// `3⌈log₃(L/ε)⌉/λ`.
    pub trichotomy_realizable: f64,
}

pub fn compare_strategies(length: f64, epsilon: f64, lambda: f64) -> Result<StrategyComparison> {
    check_epsilon(epsilon, length)?;
    let log_ratio = (length / epsilon).ln();
    let optimal = std::f64::consts::E / lambda * log_ratio;
    let dichotomy = 2.0 / (lambda * std::f64::consts::LN_2) * log_ratio;
    let trichotomy = 3.0 / (lambda * 3f64.ln()) * log_ratio;
    let one_step = length / (lambda * epsilon);
    let loss = |t: f64| t / optimal - 1.0;
    Ok(StrategyComparison {
        optimal,
        dichotomy,
        trichotomy,
        one_step,
        dichotomy_loss: loss(dichotomy),
        trichotomy_loss: loss(trichotomy),
        one_step_loss: loss(one_step),
        optimal_ladder: uniform_multistep_ladder(length, epsilon, lambda)?.mean_time,
        dichotomy_realizable: 2.0 * section_depth(2, length, epsilon) as f64 / lambda,
        trichotomy_realizable: 3.0 * section_depth(3, length, epsilon) as f64 / lambda,
    })
}

/// Smallest depth `d` with `L / arity^d <= ε`.
pub fn section_depth(arity: usize, length: f64, epsilon: f64) -> usize {
    let mut width = length;
    let mut depth = 0;
    while width > epsilon * (1.0 + 1e-12) {
        width /= arity as f64;
        depth += 1;
    }
    depth
}

/// One level of a k-section plan: the current segment, the conditional
/// masses of its sub-segments and the window's visiting weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectionLevel {
    pub start: f64,
    pub width: f64,
    pub masses: Vec<f64>,
    pub beta: Vec<f64>,
}

impl SectionLevel {
    pub fn sub_width(&self) -> f64 {
        self.width / self.masses.len() as f64
    }

    /// Index of the sub-segment containing `x`.
    pub fn child_index(&self, x: f64) -> usize {
        let k = self.masses.len();
        (((x - self.start) / self.sub_width()).floor().max(0.0) as usize).min(k - 1)
    }
}

/// Recursive periodic k-section plan for an arbitrary prior.
///
/// The segment is split into `arity` equal parts; a window one part wide
/// visits part `i` a fraction `β_i` of the time, and the part where a pulse
/// registers becomes the next segment. Levels are derived on demand because
/// the full tree has `arity^depth` nodes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSectionPlan")]
pub struct SectionPlan {
    arity: usize,
    interval_length: f64,
    epsilon: f64,
    depth: usize,
    prior: PriorDensity,
}

#[derive(Deserialize)]
struct RawSectionPlan {
    arity: usize,
    interval_length: f64,
    epsilon: f64,
    depth: Option<usize>,
    prior: PriorDensity,
}

impl TryFrom<RawSectionPlan> for SectionPlan {
    type Error = Error;

    fn try_from(raw: RawSectionPlan) -> Result<Self> {
        let plan = SectionPlan::new(raw.arity, &raw.prior, raw.interval_length, raw.epsilon)?;
        match raw.depth {
            Some(d) if d != plan.depth => Err(Error::InvalidScenario(format!(
                "depth {d} does not match the {} levels needed",
                plan.depth
            ))),
            _ => Ok(plan),
        }
    }
}

impl SectionPlan {
    pub fn new(arity: usize, prior: &PriorDensity, length: f64, epsilon: f64) -> Result<Self> {
        if arity < 2 {
            return Err(Error::InvalidScenario(format!("arity {arity} must be at least 2")));
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::NonPositiveLength(length));
        }
        if !(epsilon.is_finite() && epsilon > 0.0) {
            return Err(Error::EpsilonOutOfRange { epsilon, length });
        }
        if !crate::model::same_length(prior.length(), length) {
            return Err(Error::GridMismatch);
        }
        Ok(Self {
            arity,
            interval_length: length,
            epsilon,
            depth: section_depth(arity, length, epsilon),
            prior: prior.clone(),
        })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn interval_length(&self) -> f64 {
        self.interval_length
    }

    pub fn prior(&self) -> &PriorDensity {
        &self.prior
    }

    /// Width of the segment left after the last level.
    pub fn final_width(&self) -> f64 {
        self.interval_length / (self.arity as f64).powi(self.depth as i32)
    }

    pub fn level(&self, start: f64, width: f64) -> SectionLevel {
        let k = self.arity;
        let part = width / k as f64;
        let raw: Vec<f64> = (0..k)
            .map(|i| self.prior.mass_between(start + i as f64 * part, start + (i + 1) as f64 * part))
            .collect();
        let total: f64 = raw.iter().sum();
        let masses: Vec<f64> = if total > 0.0 {
            raw.iter().map(|m| m / total).collect()
        } else {
            vec![1.0 / k as f64; k]
        };
        let roots: Vec<f64> = masses.iter().map(|m| m.sqrt()).collect();
        let norm: f64 = roots.iter().sum();
        let beta = roots.iter().map(|r| r / norm).collect();
        SectionLevel { start, width, masses, beta }
    }

    /// The first level, or `None` for a depth-zero plan.
    pub fn root(&self) -> Option<SectionLevel> {
        (self.depth > 0).then(|| self.level(0.0, self.interval_length))
    }

    /// The levels visited while localizing a source at `x`.
    pub fn levels_along(&self, x: f64) -> Vec<SectionLevel> {
        let mut out = Vec::with_capacity(self.depth);
        let (mut start, mut width) = (0.0, self.interval_length);
        for _ in 0..self.depth {
            let level = self.level(start, width);
            let i = level.child_index(x);
            start += i as f64 * level.sub_width();
            width = level.sub_width();
            out.push(level);
        }
        out
    }

    /// Expected localization time when sources follow the plan's prior:
    /// `Σ_levels E[1/(λ β_i)]` over the visited sub-segments.
    ///
    /// Only segments straddling a prior breakpoint are expanded; below that
    /// the weights are uniform and each level costs `arity/λ`.
    pub fn expected_time(&self, lambda: f64) -> f64 {
        self.expected_from(0.0, self.interval_length, self.depth, lambda)
    }

    fn expected_from(&self, start: f64, width: f64, levels: usize, lambda: f64) -> f64 {
        if levels == 0 {
            return 0.0;
        }
        let end = start + width;
        let inside_one_cell = !self.prior.breakpoints().iter().any(|&b| b > start && b < end);
        if inside_one_cell {
            return self.arity as f64 * levels as f64 / lambda;
        }
        let level = self.level(start, width);
        let part = level.sub_width();
        level
            .masses
            .iter()
            .zip(&level.beta)
            .enumerate()
            .filter(|(_, (m, _))| **m > 0.0)
            .map(|(i, (m, b))| {
                m * (1.0 / (lambda * b)
                    + self.expected_from(start + i as f64 * part, part, levels - 1, lambda))
            })
            .sum()
    }
}

/// Trichotomy plan: three sub-segments per level.
///
/// `ε >= L` yields a depth-zero plan.
pub fn trichotomy_plan(prior: &PriorDensity, length: f64, epsilon: f64) -> Result<SectionPlan> {
    SectionPlan::new(3, prior, length, epsilon)
}

/// Dichotomy plan: two sub-segments per level.
pub fn dichotomy_plan(prior: &PriorDensity, length: f64, epsilon: f64) -> Result<SectionPlan> {
    SectionPlan::new(2, prior, length, epsilon)
}
