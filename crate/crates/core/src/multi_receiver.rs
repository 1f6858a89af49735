//! Search with `n` receivers watching overlapping zones.
//!
//! The aggregate window is split into `2^n − 1` segments and receiver `i`
//! watches every segment whose index has bit `n − i` set, so the pattern of
//! receivers that register a pulse spells out the segment number in binary.
//! A multi-stage plan repeats that inside the decoded segment.

use serde::{Deserialize, Serialize};

use crate::error::{check_epsilon, Error, Result};
use crate::model::{ReceiverCodebook, ReceiverResponse, StagePlan, StageRegime, MAX_RECEIVERS};

/// Relative slack when testing an accuracy ratio against a regime boundary.
const BOUNDARY_RTOL: f64 = 1e-12;

fn check_receivers(n: usize) -> Result<()> {
    if (1..=MAX_RECEIVERS).contains(&n) {
        Ok(())
    } else {
        Err(Error::NOutOfRange(n))
    }
}

/// `2^n − 1`, the number of distinguishable segments.
pub fn segment_count(n: usize) -> usize {
    (1usize << n) - 1
}

/// Canonical codebook: column `j` is the `n`-bit binary form of `j`, most
/// significant bit in row 1.
pub fn build_codebook(n: usize) -> Result<ReceiverCodebook> {
    check_receivers(n)?;
    let columns = (1..=segment_count(n))
        .map(|j| (0..n).map(|i| ((j >> (n - 1 - i)) & 1) as u8).collect())
        .collect();
    ReceiverCodebook::from_columns(n, columns)
}

/// Segment number `j = Σ r_i 2^(n−i)` spelled by a registration pattern.
pub fn decode_segment(codebook: &ReceiverCodebook, response: &ReceiverResponse) -> Result<usize> {
    let n = codebook.receivers();
    if response.bits.len() != n {
        return Err(Error::NOutOfRange(response.bits.len()));
    }
    if !response.is_registration() {
        return Err(Error::ZeroResponse);
    }
    let j = response.bits.iter().fold(0usize, |acc, &b| (acc << 1) | usize::from(b));
    if j > codebook.segments() {
        return Err(Error::DecodeError { expected: codebook.segments(), decoded: j });
    }
    Ok(j)
}

/// Accuracy `L/(2^n − 1)` of the single-tact procedure.
pub fn single_tact_accuracy(n: usize, length: f64) -> Result<f64> {
    check_receivers(n)?;
    Ok(length / segment_count(n) as f64)
}

/// Accuracy ratio at which `M + 1` stages start to beat `M` stages:
/// `(M/(M+1))^M / (2^n−1)^M` (and `(M/(M+1))^(M(M+1))` for one receiver).
pub fn transition_point(n: usize, stages: usize) -> f64 {
    let m = stages as f64;
    if n == 1 {
        (m / (m + 1.0)).powf(m * (m + 1.0))
    } else {
        let k = segment_count(n) as f64;
        (m / (m + 1.0)).powi(stages as i32) / k.powi(stages as i32)
    }
}

/// Accuracy ratio `1/(2^n−1)^M` where the geometric windows of an `M`-stage
/// plan reach full coverage in the first stage.
pub fn saturation_point(n: usize, stages: usize) -> f64 {
    (segment_count(n) as f64).powi(-(stages as i32))
}

/// The `ε/L` interval on which an `M`-stage plan is optimal for `n >= 2`
/// receivers.
///
/// The lower end is the transition to `M + 1` stages. Above
/// [`saturation_point`] the plan uses full-coverage windows; below it the
/// windows follow the constant-ratio ladder.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeBounds {
    pub lower: f64,
    pub upper: f64,
    pub saturation: f64,
}

pub fn regime_boundaries(n: usize, stages: usize) -> Result<RegimeBounds> {
    if !(2..=MAX_RECEIVERS).contains(&n) {
        return Err(Error::NOutOfRange(n));
    }
    if stages == 0 {
        return Err(Error::InvalidScenario("stage count must be at least 1".into()));
    }
    let upper = if stages == 1 { 1.0 } else { transition_point(n, stages - 1) };
    Ok(RegimeBounds { lower: transition_point(n, stages), upper, saturation: saturation_point(n, stages) })
}

/// `[lower, upper]` interval of optimal `M` for a single receiver.
pub fn single_receiver_regime(stages: usize) -> (f64, f64) {
    let upper = if stages == 1 { 1.0 } else { transition_point(1, stages - 1) };
    (transition_point(1, stages), upper)
}

/// Mean time of the `M`-stage constant-ratio plan,
/// `M/(λ(2^n−1)) · (ε/L)^(−1/M)`.
///
/// Requires `ε/L <= 1/(2^n−1)^M` so that the first window fits the interval.
pub fn mean_time_multistage(n: usize, stages: usize, epsilon: f64, length: f64, lambda: f64) -> Result<f64> {
    check_receivers(n)?;
    check_epsilon(epsilon, length)?;
    if stages == 0 {
        return Err(Error::InvalidScenario("stage count must be at least 1".into()));
    }
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::NonPositiveLambda(lambda));
    }
    let ratio = epsilon / length;
    let bound = saturation_point(n, stages);
    if ratio > bound * (1.0 + BOUNDARY_RTOL) {
        return Err(Error::RegimeViolation { stages, ratio, bound });
    }
    Ok(geometric_time(n, stages, ratio) / lambda)
}

fn geometric_time(n: usize, stages: usize, ratio: f64) -> f64 {
    let m = stages as f64;
    m / segment_count(n) as f64 * ratio.powf(-1.0 / m)
}

fn geometric_windows(n: usize, stages: usize, ratio: f64, length: f64, epsilon: f64) -> Vec<f64> {
    let k = segment_count(n) as f64;
    let m = stages as f64;
    let mut windows: Vec<f64> =
        (1..=stages).map(|i| k * ratio.powf(i as f64 / m) * length).collect();
    windows[stages - 1] = k * epsilon;
    windows
}

fn saturated_windows(n: usize, stages: usize, length: f64) -> Vec<f64> {
    let k = segment_count(n) as f64;
    (0..stages).map(|i| length / k.powi(i as i32)).collect()
}

/// Mean time of the two optimal regimes that meet at one boundary point,
/// each evaluated at the boundary by its own closed form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryCheck {
    pub n: usize,
    pub ratio: f64,
    /// Stage count and regime on the larger-ratio side.
    pub above: (usize, StageRegime),
    pub below: (usize, StageRegime),
    /// `λ⟨τ⟩` of the larger-ratio side at the boundary.
    pub time_above: f64,
    pub time_below: f64,
}

impl BoundaryCheck {
    pub fn gap(&self) -> f64 {
        (self.time_above - self.time_below).abs()
    }
}

/// Every regime boundary of `n` receivers down to `max_stages` stages.
///
/// For `n >= 2` these are the saturation points (saturated `M` meets
/// geometric `M`) and the transition points (geometric `M` meets saturated
/// `M + 1`); for `n = 1` the transitions between geometric plans.
pub fn boundary_continuity(n: usize, max_stages: usize) -> Result<Vec<BoundaryCheck>> {
    use StageRegime::{Geometric, Saturated};
    check_receivers(n)?;
    let mut out = Vec::new();
    for stages in 1..=max_stages {
        let m = stages as f64;
        if n == 1 {
            let ratio = transition_point(1, stages);
            out.push(BoundaryCheck {
                n,
                ratio,
                above: (stages, Geometric),
                below: (stages + 1, Geometric),
                time_above: geometric_time(1, stages, ratio),
                time_below: geometric_time(1, stages + 1, ratio),
            });
            continue;
        }
        let ratio = saturation_point(n, stages);
        out.push(BoundaryCheck {
            n,
            ratio,
            above: (stages, Saturated),
            below: (stages, Geometric),
            time_above: m,
            time_below: geometric_time(n, stages, ratio),
        });
        let ratio = transition_point(n, stages);
        out.push(BoundaryCheck {
            n,
            ratio,
            above: (stages, Geometric),
            below: (stages + 1, Saturated),
            time_above: geometric_time(n, stages, ratio),
            time_below: m + 1.0,
        });
    }
    Ok(out)
}

/// Time-optimal stage plan for `n` receivers.
///
/// For `n >= 2` the stage count is the largest `M` with
/// `ε/L <= 1/(2^n−1)^M`; below the transition point of that `M` one more
/// stage with full-coverage windows wins, and when `ε/L >= 1/(2^n−1)` a
/// single full-coverage stage already suffices. For `n = 1` the stage count
/// is the `M` whose interval `[(M/(M+1))^(M(M+1)), ((M−1)/M)^(M(M−1))]`
/// contains `ε/L`. Boundary points go to the smaller `M`.
pub fn plan_multistage(n: usize, length: f64, epsilon: f64, lambda: f64) -> Result<StagePlan> {
    check_receivers(n)?;
    check_epsilon(epsilon, length)?;
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::NonPositiveLambda(lambda));
    }
    let ratio = epsilon / length;
    let k = segment_count(n) as f64;

    if n == 1 {
        let mut stages = 1;
        while ratio < transition_point(1, stages) * (1.0 - BOUNDARY_RTOL) {
            stages += 1;
        }
        let windows = geometric_windows(1, stages, ratio, length, epsilon);
        let plan = StagePlan {
            n,
            stages,
            windows,
            epsilon,
            achieved_accuracy: epsilon,
            interval_length: length,
            mean_time: geometric_time(1, stages, ratio) / lambda,
            regime: StageRegime::Geometric,
        };
        return Ok(plan);
    }

    let saturated = |stages: usize| -> StagePlan {
        let windows = saturated_windows(n, stages, length);
        StagePlan {
            n,
            stages,
            achieved_accuracy: windows[stages - 1] / k,
            windows,
            epsilon,
            interval_length: length,
            mean_time: stages as f64 / lambda,
            regime: StageRegime::Saturated,
        }
    };

    if ratio > saturation_point(n, 1) * (1.0 + BOUNDARY_RTOL) {
        return Ok(saturated(1));
    }
    // Largest M with ratio <= 1/K^M.
    let mut stages = 1;
    while ratio <= saturation_point(n, stages + 1) * (1.0 + BOUNDARY_RTOL) {
        stages += 1;
    }
    if ratio >= transition_point(n, stages) * (1.0 - BOUNDARY_RTOL) {
        Ok(StagePlan {
            n,
            stages,
            windows: geometric_windows(n, stages, ratio, length, epsilon),
            epsilon,
            achieved_accuracy: epsilon,
            interval_length: length,
            mean_time: geometric_time(n, stages, ratio) / lambda,
            regime: StageRegime::Geometric,
        })
    } else {
        Ok(saturated(stages + 1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn codebook_examples() {
        let cb = build_codebook(2).unwrap();
        assert_eq!(cb.segments(), 3);
        assert_eq!(cb.columns(), &[vec![0, 1], vec![1, 0], vec![1, 1]]);
        let cb = build_codebook(1).unwrap();
        assert_eq!(cb.columns(), &[vec![1]]);
        let cb = build_codebook(3).unwrap();
        assert_eq!(cb.segments(), 7);
        assert_eq!(cb.column(5).unwrap(), &[1, 0, 1]);
        assert_eq!(build_codebook(0).unwrap_err().name(), "NOutOfRange");
        assert_eq!(build_codebook(17).unwrap_err().name(), "NOutOfRange");
    }

    #[test]
    fn decode_examples() {
        let cb2 = build_codebook(2).unwrap();
        let r = |bits: &[u8]| ReceiverResponse::new(bits.iter().map(|&b| b == 1).collect());
        assert_eq!(decode_segment(&cb2, &r(&[0, 1])).unwrap(), 1);
        assert_eq!(decode_segment(&cb2, &r(&[1, 1])).unwrap(), 3);
        let cb3 = build_codebook(3).unwrap();
        assert_eq!(decode_segment(&cb3, &r(&[1, 1, 0])).unwrap(), 6);
        assert_eq!(decode_segment(&cb3, &r(&[0, 0, 0])).unwrap_err(), Error::ZeroResponse);
    }

    #[test]
    fn single_tact_examples() {
        assert!(close(single_tact_accuracy(3, 1.0).unwrap(), 1.0 / 7.0, 1e-15));
        assert_eq!(single_tact_accuracy(1, 1.0).unwrap(), 1.0);
        assert_eq!(single_tact_accuracy(10, 1023.0).unwrap(), 1.0);
    }

    #[test]
    fn regime_boundary_examples() {
        let b = regime_boundaries(2, 1).unwrap();
        assert!(close(b.lower, 1.0 / 6.0, 1e-15));
        assert_eq!(b.upper, 1.0);
        let b = regime_boundaries(2, 2).unwrap();
        assert!(close(b.lower, 4.0 / 81.0, 1e-15));
        assert!(close(b.upper, 1.0 / 6.0, 1e-15));
        assert!(close(b.saturation, 1.0 / 9.0, 1e-15));
        assert_eq!(regime_boundaries(1, 1).unwrap_err().name(), "NOutOfRange");
        // At the saturation point the constant-ratio plan takes exactly M/λ.
        for n in 2..=4 {
            for m in 1..=4 {
                let r = saturation_point(n, m);
                let t = mean_time_multistage(n, m, r, 1.0, 1.0).unwrap();
                assert!(close(t, m as f64, 1e-12));
            }
        }
    }

    #[test]
    fn multistage_time_examples() {
        // M/(λK) (ε/L)^(-1/M) at n=2, M=2, ε/L=1/81: (2/3)·9.
        let t = mean_time_multistage(2, 2, 1.0 / 81.0, 1.0, 1.0).unwrap();
        assert!(close(t, 6.0, 1e-12));
        let err = mean_time_multistage(2, 2, 0.2, 1.0, 1.0).unwrap_err();
        assert_eq!(err.name(), "RegimeViolation");
        // Deep accuracy: M/λ with M = −ln(ε/L)/ln(2^n−1).
        let plan = plan_multistage(3, 1.0, 7f64.powi(-20), 1.0).unwrap();
        assert_eq!(plan.stages, 20);
        assert!(close(plan.mean_time, -(7f64.powi(-20)).ln() / 7f64.ln(), 1e-9));
    }

    #[test]
    fn plan_examples() {
        let p = plan_multistage(3, 1.0, 0.5, 1.0).unwrap();
        assert_eq!((p.stages, p.regime), (1, StageRegime::Saturated));
        assert_eq!(p.windows, vec![1.0]);
        assert_eq!(p.mean_time, 1.0);
        assert!(close(p.achieved_accuracy, 1.0 / 7.0, 1e-15));

        let p = plan_multistage(2, 1.0, 0.125, 1.0).unwrap();
        assert_eq!(p.stages, 2);
        assert!(close(p.windows[0], 1.0, 1e-15) && close(p.windows[1], 1.0 / 3.0, 1e-15));
        assert_eq!(p.mean_time, 2.0);

        let p = plan_multistage(1, 1.0, 0.25, 1.0).unwrap();
        assert_eq!(p.stages, 1);
        assert_eq!(p.windows, vec![0.25]);
        assert!(close(p.mean_time, 4.0, 1e-12));

        let p = plan_multistage(1, 1.0, 0.09, 1.0).unwrap();
        assert_eq!(p.stages, 2);
        assert!(close(p.windows[0], 0.3, 1e-12) && close(p.windows[1], 0.09, 1e-15));
        assert!(close(p.mean_time, 2.0 / 0.3, 1e-12));

        assert_eq!(plan_multistage(2, 1.0, 1.0, 1.0).unwrap_err().name(), "EpsilonOutOfRange");
    }

    #[test]
    fn plans_satisfy_window_invariants() {
        for n in 1..=5 {
            for i in 1..400 {
                let r = 10f64.powf(-6.0 * i as f64 / 400.0);
                let p = plan_multistage(n, 2.0, 2.0 * r, 1.0).unwrap();
                p.check().unwrap_or_else(|e| panic!("n={n} r={r}: {e}"));
                if p.regime == StageRegime::Geometric && n >= 2 {
                    assert!(close(p.windows[p.stages - 1], segment_count(n) as f64 * p.epsilon, 1e-12));
                }
            }
        }
    }

    #[test]
    fn regimes_meet_continuously() {
        for n in 1..=4 {
            for b in boundary_continuity(n, 6).unwrap() {
                assert!(b.gap() < 1e-9, "{b:?}");
                let above = plan_multistage(n, 1.0, b.ratio * (1.0 + 1e-6), 1.0).unwrap();
                let below = plan_multistage(n, 1.0, b.ratio * (1.0 - 1e-6), 1.0).unwrap();
                assert_eq!((above.stages, above.regime), b.above, "{b:?}");
                assert_eq!((below.stages, below.regime), b.below, "{b:?}");
            }
        }
    }
}
