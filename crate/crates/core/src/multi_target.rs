//! Localizing the first of `n` uniformly placed sources with one receiver.
//!
//! All arc lengths are fractions of the unit circle. The number of sources
//! inside the aperture when a pulse registers follows a shifted binomial
//! law; the mean time of a ladder of narrowing apertures is then a sum of
//! per-step terms, and the optimal ladder is found by shooting on the
//! stationarity recurrence for every candidate step count.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::ApertureLadder;

fn ln_binomial(n: usize, k: usize) -> f64 {
    if k == 0 || k == n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).map(|i| ((n - i) as f64).ln() - ((i + 1) as f64).ln()).sum()
}

fn check_arc(l: f64) -> Result<()> {
    if l.is_finite() && l > 0.0 && l <= 1.0 {
        Ok(())
    } else {
        Err(Error::LOutOfRange(l))
    }
}

/// Probability that exactly `k` of `n` sources sit in an aperture of arc `l`
/// at the moment a pulse registers: `C(n-1, k-1) l^(k-1) (1-l)^(n-k)`.
pub fn prob_k_in_aperture(n: usize, k: usize, l: f64) -> Result<f64> {
    if k == 0 || k > n {
        return Err(Error::KOutOfRange { n, k });
    }
    check_arc(l)?;
    Ok(binomial_term(n - 1, k - 1, l))
}

/// `C(trials, successes) p^successes (1-p)^(trials-successes)`.
fn binomial_term(trials: usize, successes: usize, p: f64) -> f64 {
    let failures = trials - successes;
    let q = 1.0 - p;
    if q == 0.0 {
        return if failures == 0 { 1.0 } else { 0.0 };
    }
    if trials <= 60 {
        let coeff = exact_binomial(trials, successes);
        coeff * p.powi(successes as i32) * q.powi(failures as i32)
    } else {
        (ln_binomial(trials, successes) + successes as f64 * p.ln() + failures as f64 * q.ln()).exp()
    }
}

fn exact_binomial(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    let mut c: u64 = 1;
    for i in 0..k as u64 {
        c = c * (n as u64 - i) / (i + 1);
    }
    c as f64
}

/// The whole in-aperture count law `k = 1..=n`.
pub fn aperture_count_distribution(n: usize, l: f64) -> Result<Vec<f64>> {
    (1..=n).map(|k| prob_k_in_aperture(n, k, l)).collect()
}

/// Two ways of computing the count law after narrowing from `l1` to `l2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompositionCheck {
    /// `Σ_i P_n(i, l1) P_i(k, l2/l1)` for `k = 1..=n`.
    pub two_stage: Vec<f64>,
    /// `P_n(k, l2)` for `k = 1..=n`.
    pub direct: Vec<f64>,
}

impl CompositionCheck {
    pub fn max_abs_diff(&self) -> f64 {
        self.two_stage.iter().zip(&self.direct).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }
}

pub fn composition_invariance_check(n: usize, l1: f64, l2: f64) -> Result<CompositionCheck> {
    if n == 0 {
        return Err(Error::KOutOfRange { n, k: 1 });
    }
    if !(l2 > 0.0 && l2 < l1 && l1 < 1.0) {
        return Err(Error::ApertureOrderViolation { previous: l1, current: l2 });
    }
    let first = aperture_count_distribution(n, l1)?;
    let ratio = l2 / l1;
    let two_stage = (1..=n)
        .map(|k| {
            (k..=n)
                .map(|i| first[i - 1] * prob_k_in_aperture(i, k, ratio).expect("k <= i, 0 < ratio < 1"))
                .sum()
        })
        .collect();
    Ok(CompositionCheck { two_stage, direct: aperture_count_distribution(n, l2)? })
}

/// Mean duration of one narrowing step: `(1 - (1-l_prev)^n) / (n λ l_cur)`.
pub fn step_mean_time(n: usize, l_prev: f64, l_cur: f64, lambda: f64) -> Result<f64> {
    if !(l_cur > 0.0 && l_cur < l_prev && l_prev <= 1.0) {
        return Err(Error::ApertureOrderViolation { previous: l_prev, current: l_cur });
    }
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::NonPositiveLambda(lambda));
    }
    Ok(step_term(n, l_prev, l_cur) / lambda)
}

fn step_term(n: usize, l_prev: f64, l_cur: f64) -> f64 {
    (1.0 - (1.0 - l_prev).powi(n as i32)) / (n as f64 * l_cur)
}

fn ladder_term(n: usize, widths: &[f64]) -> f64 {
    widths.windows(2).map(|w| step_term(n, w[0], w[1])).sum()
}

/// Mean time to localize the first of `n` sources with the given ladder.
/// The ladder must start at the full circle, `l_0 = 1`.
pub fn total_mean_time(n: usize, ladder: &ApertureLadder, lambda: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::KOutOfRange { n, k: 1 });
    }
    if (ladder.full_length() - 1.0).abs() > 1e-12 {
        return Err(Error::LadderInvalid(format!(
            "ladder must start at the unit circle, got l_0 = {}",
            ladder.full_length()
        )));
    }
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::NonPositiveLambda(lambda));
    }
    Ok(ladder_term(n, ladder.widths()) / lambda)
}

/// Optimal ladder for one step count (or overall) with its `λ⟨τ⟩`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LadderSolution {
    pub m: usize,
    pub ladder: ApertureLadder,
    /// Mean time at `λ = 1`.
    pub mean_time: f64,
}

/// Points of the log-spaced scan for sign changes of the shooting residual.
const SHOOTING_SCAN: usize = 4000;

/// Follows the stationarity recurrence
/// `l_{i+1} = n l_i² (1-l_i)^(n-1) / (1 - (1-l_{i-1})^n)` from `(1, l_1)`.
pub fn shoot(n: usize, first: f64, steps: usize) -> Vec<f64> {
    let mut widths = Vec::with_capacity(steps + 1);
    widths.push(1.0);
    widths.push(first);
    for i in 1..steps {
        let (prev, cur) = (widths[i - 1], widths[i]);
        let next = n as f64 * cur * cur * (1.0 - cur).powi(n as i32 - 1)
            / (1.0 - (1.0 - prev).powi(n as i32));
        widths.push(next);
    }
    widths
}

/// Residual of the stationarity recurrence at interior rung `i` (1-based),
/// relative to `l_{i+1}`.
pub fn stationarity_residual(n: usize, widths: &[f64], i: usize) -> f64 {
    let (prev, cur, next) = (widths[i - 1], widths[i], widths[i + 1]);
    let predicted =
        n as f64 * cur * cur * (1.0 - cur).powi(n as i32 - 1) / (1.0 - (1.0 - prev).powi(n as i32));
    (predicted - next).abs() / next
}

/// Best stationary ladder with exactly `steps` steps ending at `epsilon`.
///
/// The final rung is not monotone in `l_1` (it rises, then falls back as
/// `(1-l_1)^(n-1)` vanishes), so the interval `(ε, 1)` is scanned on a log
/// grid for sign changes of `ln l_m − ln ε`, each bracket is bisected, and
/// among the strictly decreasing ladders found the fastest is returned.
pub fn solve_ladder_for_steps(n: usize, epsilon: f64, steps: usize) -> Result<LadderSolution> {
    if n == 0 {
        return Err(Error::KOutOfRange { n, k: 1 });
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::EpsilonOutOfRange { epsilon, length: 1.0 });
    }
    if steps == 0 {
        return Err(Error::NoSolution { steps });
    }
    if steps == 1 {
        let ladder = ApertureLadder::new(vec![1.0, epsilon])?;
        let mean_time = ladder_term(n, ladder.widths());
        return Ok(LadderSolution { m: 1, ladder, mean_time });
    }
    let target = epsilon.ln();
    let miss = |first: f64| -> f64 {
        let last = *shoot(n, first, steps).last().expect("nonempty");
        if last > 0.0 && last.is_finite() {
            last.ln() - target
        } else {
            f64::NEG_INFINITY
        }
    };
    let (lo_log, hi_log) = (epsilon.ln(), 0.0f64);
    let grid: Vec<f64> = (1..SHOOTING_SCAN)
        .map(|i| (lo_log + (hi_log - lo_log) * i as f64 / SHOOTING_SCAN as f64).exp())
        .collect();
    let values: Vec<f64> = grid.iter().map(|&x| miss(x)).collect();

    let mut best: Option<LadderSolution> = None;
    for idx in 0..grid.len() - 1 {
        let (fa, fb) = (values[idx], values[idx + 1]);
        if !(fa.is_finite() || fb.is_finite()) || (fa > 0.0) == (fb > 0.0) {
            continue;
        }
        let (mut lo, mut hi) = (grid[idx], grid[idx + 1]);
        let lo_positive = fa > 0.0;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if (miss(mid) > 0.0) == lo_positive {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let first = 0.5 * (lo + hi);
        let mut widths = shoot(n, first, steps);
        let last = widths[steps];
        if !last.is_finite() || (last / epsilon - 1.0).abs() > 1e-10 {
            continue;
        }
        widths[steps] = epsilon;
        let Ok(ladder) = ApertureLadder::new(widths) else {
            continue;
        };
        let mean_time = ladder_term(n, ladder.widths());
        if best.as_ref().is_none_or(|b| mean_time < b.mean_time) {
            best = Some(LadderSolution { m: steps, ladder, mean_time });
        }
    }
    best.ok_or(Error::NoSolution { steps })
}

/// Upper bound on the candidate step counts: `⌈−ln ε⌉ + 4`.
pub fn max_steps(epsilon: f64) -> usize {
    (-epsilon.ln()).ceil().max(0.0) as usize + 4
}

/// Time-optimal ladder for localizing the first of `n` sources to accuracy
/// `epsilon` (a fraction of the circle). Step counts whose shooting finds no
/// ladder are skipped; near-ties within `1e-9` go to the smaller count.
pub fn optimize_ladder(n: usize, epsilon: f64) -> Result<LadderSolution> {
    if n == 0 {
        return Err(Error::KOutOfRange { n, k: 1 });
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::EpsilonOutOfRange { epsilon, length: 1.0 });
    }
    let mut best: Option<LadderSolution> = None;
    for steps in 1..=max_steps(epsilon) {
        match solve_ladder_for_steps(n, epsilon, steps) {
            Ok(sol) => {
                if best.as_ref().is_none_or(|b| sol.mean_time < b.mean_time - 1e-9) {
                    best = Some(sol);
                }
            }
            Err(Error::NoSolution { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    best.ok_or(Error::AllInfeasible)
}
