//! Brute-force ground truth for the analytic formulas.
//!
//! Two Monte Carlo estimators of the in-aperture count law (direct
//! simulation of the registration geometry, and importance sampling of the
//! ordered-coordinates integral) and a generic constrained minimizer for the
//! discretized load-allocation problems. None of this code calls into the
//! planners it is used to check.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stream::{fold_trials, Moments, TrialStreams, RNG_ALGORITHM};

/// A Monte Carlo probability estimate with its provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub value: f64,
    pub stderr: f64,
    pub trials: u64,
    pub seed: u64,
    pub algorithm: String,
}

impl McEstimate {
    fn bernoulli(hits: u64, trials: u64, seed: u64) -> Self {
        let value = hits as f64 / trials as f64;
        Self {
            value,
            stderr: (value * (1.0 - value) / trials as f64).sqrt(),
            trials,
            seed,
            algorithm: RNG_ALGORITHM.to_string(),
        }
    }

    /// Whether `expected` lies within `sigmas` standard errors. The binomial
    /// error of `expected` itself is used when larger, so that a rare event
    /// with no hits is still judged sensibly.
    pub fn agrees_with(&self, expected: f64, sigmas: f64) -> bool {
        let reference = (expected * (1.0 - expected) / self.trials as f64).sqrt();
        (self.value - expected).abs() <= sigmas * self.stderr.max(reference)
    }
}

fn check_counts(n: usize, k: usize, l: f64) -> Result<()> {
    if k == 0 || k > n {
        return Err(Error::KOutOfRange { n, k });
    }
    if !(l.is_finite() && l > 0.0 && l <= 1.0) {
        return Err(Error::LOutOfRange(l));
    }
    Ok(())
}

/// Estimates `P(exactly k sources in the aperture)` for every `k = 1..=n`
/// from one set of simulated registrations.
///
/// Each trial throws `n` points on the unit circle, picks the initiator
/// uniformly among them, centres the aperture uniformly within `±l/2` of the
/// initiator and counts the points inside the arc.
pub fn mc_count_distribution(n: usize, l: f64, trials: u64, seed: u64) -> Result<Vec<McEstimate>> {
    check_counts(n, 1, l)?;
    if trials == 0 {
        return Err(Error::InvalidScenario("trials must be at least 1".into()));
    }
    let streams = TrialStreams::new(seed);
    let hits = fold_trials(
        trials,
        || vec![0u64; n + 1],
        |hist, i| {
            let mut rng = streams.trial(i);
            let points: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
            let initiator = points[rng.random_range(0..n)];
            let centre = initiator + (rng.random::<f64>() - 0.5) * l;
            let start = centre - 0.5 * l;
            let inside = points.iter().filter(|&&x| (x - start).rem_euclid(1.0) < l).count();
            hist[inside] += 1;
            Ok(())
        },
        |mut a, b| {
            a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
            a
        },
    )?;
    Ok((1..=n).map(|k| McEstimate::bernoulli(hits[k], trials, seed)).collect())
}

/// Simulated estimate of `P_n(k, l)`; see [`mc_count_distribution`].
pub fn mc_prob_k(n: usize, k: usize, l: f64, trials: u64, seed: u64) -> Result<McEstimate> {
    check_counts(n, k, l)?;
    Ok(mc_count_distribution(n, l, trials, seed)?.swap_remove(k - 1))
}

/// Estimates `P_n(k, l)` through the ordered-coordinates integral.
///
/// With `x_1 = 0` and the other points ranked clockwise, the run
/// `x_1..x_k` is exactly the aperture content when the aperture start lies
/// in an interval of length
/// `min{l − x_k, x_{k+1} − x_k, x_{k+1} − l + 1 − x_n}` (restricted to the
/// half of the simplex where the gap after the run is the smaller one, hence
/// the factor 2 unless `k = n`). Sorted uniforms sample the simplex with
/// density `(n−1)!`, so each trial contributes `c·k/l` times that length.
pub fn mc_region_probability(n: usize, k: usize, l: f64, trials: u64, seed: u64) -> Result<McEstimate> {
    check_counts(n, k, l)?;
    if n < 2 {
        return Err(Error::KOutOfRange { n, k });
    }
    if l >= 1.0 {
        return Err(Error::LOutOfRange(l));
    }
    if trials == 0 {
        return Err(Error::InvalidScenario("trials must be at least 1".into()));
    }
    let doubling = if k < n { 2.0 } else { 1.0 };
    let scale = doubling * k as f64 / l;
    let streams = TrialStreams::new(seed);
    let moments = fold_trials(
        trials,
        Moments::default,
        |m, i| {
            let mut rng = streams.trial(i);
            // x[0] = x_1 = 0, x[1..n] sorted, x[n] = x_{n+1} = 1.
            let mut x = Vec::with_capacity(n + 1);
            x.push(0.0);
            x.extend((1..n).map(|_| rng.random::<f64>()));
            x[1..].sort_by(f64::total_cmp);
            x.push(1.0);
            let (xk, xk1, xn) = (x[k - 1], x[k], x[n - 1]);
            let weight = if k < n {
                let in_region = xk1 - xk <= 1.0 - xn && xk1 + (1.0 - xn) > l && xk < l;
                if in_region {
                    (l - xk).min(xk1 - xk).min(xk1 - l + 1.0 - xn).max(0.0)
                } else {
                    0.0
                }
            } else if xk < l {
                l - xk
            } else {
                0.0
            };
            m.push(scale * weight);
            Ok(())
        },
        Moments::merge,
    )?;
    Ok(McEstimate {
        value: moments.mean,
        stderr: moments.stderr(),
        trials,
        seed,
        algorithm: RNG_ALGORITHM.to_string(),
    })
}

/// Per-cell integrand of a separable convex objective `Σ w_i g_i(x_i)`.
pub trait SeparableObjective {
    fn value(&self, cell: usize, x: f64) -> f64;
    fn derivative(&self, cell: usize, x: f64) -> f64;
    fn curvature(&self, cell: usize, x: f64) -> f64;
}

/// `f_i / x`: mean time of a periodic load (up to `1/λ`).
pub struct InverseLoad<'a> {
    pub density: &'a [f64],
}

impl SeparableObjective for InverseLoad<'_> {
    fn value(&self, cell: usize, x: f64) -> f64 {
        let f = self.density[cell];
        if f == 0.0 {
            0.0
        } else if x <= 0.0 {
            f64::INFINITY
        } else {
            f / x
        }
    }

    fn derivative(&self, cell: usize, x: f64) -> f64 {
        let f = self.density[cell];
        if f == 0.0 {
            0.0
        } else {
            -f / (x * x)
        }
    }

    fn curvature(&self, cell: usize, x: f64) -> f64 {
        let f = self.density[cell];
        if f == 0.0 {
            0.0
        } else {
            2.0 * f / (x * x * x)
        }
    }
}

/// `f_i exp(−λ x)`: probability of no registration by time `t` given a
/// cumulative load `x`.
pub struct ExpLoad<'a> {
    pub density: &'a [f64],
    pub lambda: f64,
}

impl SeparableObjective for ExpLoad<'_> {
    fn value(&self, cell: usize, x: f64) -> f64 {
        self.density[cell] * (-self.lambda * x).exp()
    }

    fn derivative(&self, cell: usize, x: f64) -> f64 {
        -self.lambda * self.value(cell, x)
    }

    fn curvature(&self, cell: usize, x: f64) -> f64 {
        self.lambda * self.lambda * self.value(cell, x)
    }
}

/// `Σ w_i g_i(x_i)`.
pub fn objective_total<O: SeparableObjective>(objective: &O, widths: &[f64], x: &[f64]) -> f64 {
    widths.iter().zip(x).enumerate().map(|(i, (w, xi))| w * objective.value(i, *xi)).sum()
}

const MAX_ITERATIONS: usize = 5000;

/// Minimizes `Σ w_i g_i(x_i)` subject to `Σ w_i x_i = budget` and
/// `0 <= x_i <= upper_i`.
///
/// Diagonally scaled projected gradient: each iteration takes the Newton
/// step of the separable quadratic model, projects it onto the budget
/// hyperplane and box (bisection on the budget multiplier), and backtracks
/// along the resulting feasible direction until the Armijo condition holds.
pub fn constrained_minimizer<O: SeparableObjective>(
    objective: &O,
    widths: &[f64],
    budget: f64,
    upper: &[f64],
) -> Result<Vec<f64>> {
    let cells = widths.len();
    assert_eq!(upper.len(), cells, "one cap per cell");
    let capacity: f64 = widths.iter().zip(upper).map(|(w, u)| w * u).sum();
    if !(budget >= 0.0 && budget <= capacity * (1.0 + 1e-12)) {
        return Err(Error::Infeasible { budget, capacity });
    }

    // Start from the budget spread evenly, capped by `upper`.
    let lower = vec![0.0; cells];
    let zero = vec![0.0; cells];
    let flat = vec![1.0; cells];
    let mut x = project(&zero, &zero, &flat, widths, budget, &lower, upper);
    let mut f = objective_total(objective, widths, &x);
    if !f.is_finite() {
        let width: f64 = widths.iter().sum();
        x = project(&vec![budget / width; cells], &zero, &flat, widths, budget, &lower, upper);
        f = objective_total(objective, widths, &x);
    }

    for _ in 0..MAX_ITERATIONS {
        let grad: Vec<f64> = (0..cells).map(|i| objective.derivative(i, x[i])).collect();
        let raw: Vec<f64> = (0..cells).map(|i| objective.curvature(i, x[i])).collect();
        // Flat cells get a curvature far below every curved one, so they
        // move freely without distorting the scale of the others.
        let top = raw.iter().copied().filter(|h| h.is_finite()).fold(0.0, f64::max);
        let floor = if top > 0.0 { 1e-12 * top } else { 1.0 };
        let curv: Vec<f64> = raw.iter().map(|h| h.max(floor)).collect();
        let target = project(&x, &grad, &curv, widths, budget, &lower, upper);
        let dir: Vec<f64> = target.iter().zip(&x).map(|(t, xi)| t - xi).collect();
        let slope: f64 = (0..cells).map(|i| widths[i] * grad[i] * dir[i]).sum();
        let step_size = dir.iter().fold(0.0f64, |m, d| m.max(d.abs()));
        if step_size <= 1e-14 * (1.0 + x.iter().fold(0.0f64, |m, v| m.max(v.abs()))) || slope >= 0.0 {
            return Ok(x);
        }
        let mut t = 1.0;
        loop {
            let trial: Vec<f64> = x.iter().zip(&dir).map(|(xi, d)| xi + t * d).collect();
            let ft = objective_total(objective, widths, &trial);
            if ft.is_finite() && ft <= f + 1e-4 * t * slope {
                let gain = f - ft;
                x = trial;
                f = ft;
                if gain <= 1e-16 * f.abs().max(1e-300) && t == 1.0 {
                    return Ok(x);
                }
                break;
            }
            t *= 0.5;
            if t < 1e-20 {
                // No representable decrease left along this direction.
                return Ok(x);
            }
        }
    }
    Err(Error::NotConverged(MAX_ITERATIONS))
}

/// `argmin Σ w_i h_i (z_i − x_i)² / 2 + w_i g_i z_i` over the budget
/// hyperplane and box: `z_i = clamp(x_i − (g_i + ν)/h_i)` with `ν` chosen by
/// bisection, then blended between the bracket ends to hit the budget.
fn project(
    x: &[f64],
    grad: &[f64],
    curv: &[f64],
    widths: &[f64],
    budget: f64,
    lower: &[f64],
    upper: &[f64],
) -> Vec<f64> {
    let at = |nu: f64| -> Vec<f64> {
        (0..x.len()).map(|i| (x[i] - (grad[i] + nu) / curv[i]).clamp(lower[i], upper[i])).collect()
    };
    let load = |z: &[f64]| -> f64 { z.iter().zip(widths).map(|(a, w)| a * w).sum() };
    // load(at(nu)) is nonincreasing in nu.
    let mut lo = -1.0;
    let mut hi = 1.0;
    while load(&at(lo)) < budget && lo > -1e300 {
        lo *= 2.0;
    }
    while load(&at(hi)) > budget && hi < 1e300 {
        hi *= 2.0;
    }
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if load(&at(mid)) > budget {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (za, zb) = (at(lo), at(hi));
    let (la, lb) = (load(&za), load(&zb));
    let theta = if (la - lb).abs() > 0.0 { ((la - budget) / (la - lb)).clamp(0.0, 1.0) } else { 0.0 };
    za.iter().zip(&zb).map(|(a, b)| a + theta * (b - a)).collect()
}
