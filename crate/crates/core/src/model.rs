//! Domain types shared by the planners, the oracle and the simulator.
//!
//! Everything here is plain data plus invariant checks. All types serialize
//! to the JSON plan-file format; deserialization re-validates, so a plan
//! read from disk carries the same guarantees as one built in memory.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance used when comparing lengths that should coincide.
pub(crate) const LENGTH_RTOL: f64 = 1e-12;

pub(crate) fn same_length(a: f64, b: f64) -> bool {
    (a - b).abs() <= LENGTH_RTOL * a.abs().max(b.abs()).max(1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DensityKind {
    Uniform,
    PiecewiseConstant,
}

/// Piecewise-constant prior density of the source position over `(0, L)`.
///
/// `breakpoints` holds every cell boundary, starting at `0` and ending at
/// `L`, so there is one more breakpoint than there are `values`. The values
/// are renormalized on construction so the density integrates to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPrior")]
pub struct PriorDensity {
    kind: DensityKind,
    breakpoints: Vec<f64>,
    values: Vec<f64>,
}

#[derive(Deserialize)]
struct RawPrior {
    kind: DensityKind,
    breakpoints: Vec<f64>,
    values: Vec<f64>,
}

impl TryFrom<RawPrior> for PriorDensity {
    type Error = Error;

    fn try_from(raw: RawPrior) -> Result<Self> {
        match raw.kind {
            DensityKind::Uniform => {
                let length = raw.breakpoints.last().copied().unwrap_or(f64::NAN);
                if raw.breakpoints.len() != 2 || raw.breakpoints[0] != 0.0 {
                    return Err(Error::UnorderedBreakpoints(
                        "a uniform prior has exactly the breakpoints [0, L]".into(),
                    ));
                }
                PriorDensity::uniform(length)
            }
            DensityKind::PiecewiseConstant => PriorDensity::piecewise(raw.breakpoints, raw.values),
        }
    }
}

impl PriorDensity {
    pub fn uniform(length: f64) -> Result<Self> {
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::NonPositiveLength(length));
        }
        Ok(Self {
            kind: DensityKind::Uniform,
            breakpoints: vec![0.0, length],
            values: vec![1.0 / length],
        })
    }

    /// Builds a piecewise-constant density and rescales it to unit mass.
    pub fn piecewise(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if values.is_empty() || breakpoints.len() != values.len() + 1 {
            return Err(Error::UnorderedBreakpoints(format!(
                "{} breakpoints for {} values",
                breakpoints.len(),
                values.len()
            )));
        }
        if breakpoints[0] != 0.0 {
            return Err(Error::UnorderedBreakpoints("first breakpoint must be 0".into()));
        }
        if breakpoints.iter().any(|b| !b.is_finite())
            || breakpoints.windows(2).any(|w| w[1] <= w[0])
        {
            return Err(Error::UnorderedBreakpoints("breakpoints must increase strictly".into()));
        }
        if let Some((index, &value)) =
            values.iter().enumerate().find(|(_, v)| !(v.is_finite() && **v >= 0.0))
        {
            return Err(Error::NegativeDensity { index, value });
        }
        let mass: f64 = values
            .iter()
            .zip(breakpoints.windows(2))
            .map(|(v, w)| v * (w[1] - w[0]))
            .sum();
        if mass <= 0.0 {
            return Err(Error::NegativeDensity { index: 0, value: 0.0 });
        }
        let values = values.iter().map(|v| v / mass).collect();
        Ok(Self { kind: DensityKind::PiecewiseConstant, breakpoints, values })
    }

    /// Density levels of `masses.len()` equal cells covering `(0, length)`,
    /// each cell carrying the given probability mass (renormalized).
    pub fn from_cell_masses(length: f64, masses: &[f64]) -> Result<Self> {
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::NonPositiveLength(length));
        }
        let cells = masses.len();
        let width = length / cells as f64;
        let mut breakpoints: Vec<f64> = (0..cells).map(|i| i as f64 * width).collect();
        breakpoints.push(length);
        Self::piecewise(breakpoints, masses.iter().map(|m| m / width).collect())
    }

    pub fn kind(&self) -> DensityKind {
        self.kind
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn length(&self) -> f64 {
        *self.breakpoints.last().expect("prior has breakpoints")
    }

    pub fn cell_count(&self) -> usize {
        self.values.len()
    }

    pub fn widths(&self) -> Vec<f64> {
        self.breakpoints.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// Probability mass of each cell.
    pub fn cell_masses(&self) -> Vec<f64> {
        self.values.iter().zip(self.widths()).map(|(v, w)| v * w).collect()
    }

    pub fn total_mass(&self) -> f64 {
        self.cell_masses().iter().sum()
    }

    pub fn density_at(&self, x: f64) -> f64 {
        if x < 0.0 || x >= self.length() {
            return 0.0;
        }
        let idx = self.breakpoints.partition_point(|&b| b <= x) - 1;
        self.values[idx.min(self.values.len() - 1)]
    }

    /// Integral of the density over `[a, b] ∩ [0, L]`.
    pub fn mass_between(&self, a: f64, b: f64) -> f64 {
        if b <= a {
            return 0.0;
        }
        self.breakpoints
            .windows(2)
            .zip(&self.values)
            .map(|(w, v)| {
                let lo = w[0].max(a);
                let hi = w[1].min(b);
                if hi > lo {
                    v * (hi - lo)
                } else {
                    0.0
                }
            })
            .sum()
    }

    /// Inverse CDF: maps `u` in `[0, 1)` to a position in `[0, L)`.
    pub fn quantile(&self, u: f64) -> f64 {
        let mut acc = 0.0;
        let masses = self.cell_masses();
        let total: f64 = masses.iter().sum();
        let target = u * total;
        for (i, m) in masses.iter().enumerate() {
            if *m > 0.0 && target < acc + m {
                let lo = self.breakpoints[i];
                let hi = self.breakpoints[i + 1];
                let x = lo + (target - acc) / self.values[i];
                return x.clamp(lo, hi * (1.0 - f64::EPSILON));
            }
            acc += m;
        }
        // u rounding up against the total: last cell with mass.
        let last = masses.iter().rposition(|m| *m > 0.0).expect("positive mass");
        let lo = self.breakpoints[last];
        let hi = self.breakpoints[last + 1];
        lo + (hi - lo) * (1.0 - f64::EPSILON)
    }
}

/// Poisson pulsed source: intensity, prior over the search interval and the
/// interval length. Pauses between pulses are `Exp(lambda)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SourceModel {
    pub lambda: f64,
    pub prior: PriorDensity,
    pub interval_length: f64,
}

impl SourceModel {
    pub fn uniform(lambda: f64, interval_length: f64) -> Result<Self> {
        Self { lambda, prior: PriorDensity::uniform(interval_length)?, interval_length }.validate()
    }

    /// Checks every field and returns the model with its prior renormalized.
    pub fn validate(self) -> Result<Self> {
        if !(self.lambda.is_finite() && self.lambda > 0.0) {
            return Err(Error::NonPositiveLambda(self.lambda));
        }
        if !(self.interval_length.is_finite() && self.interval_length > 0.0) {
            return Err(Error::NonPositiveLength(self.interval_length));
        }
        if !same_length(self.prior.length(), self.interval_length) {
            return Err(Error::UnorderedBreakpoints(format!(
                "prior support ends at {} but the interval length is {}",
                self.prior.length(),
                self.interval_length
            )));
        }
        let prior = match self.prior.kind {
            DensityKind::Uniform => PriorDensity::uniform(self.interval_length)?,
            DensityKind::PiecewiseConstant => {
                PriorDensity::piecewise(self.prior.breakpoints, self.prior.values)?
            }
        };
        Ok(Self { prior, ..self })
    }

    /// Density of the pause between consecutive pulses.
    pub fn pause_density(&self, t: f64) -> f64 {
        if t < 0.0 {
            0.0
        } else {
            self.lambda * (-self.lambda * t).exp()
        }
    }

    pub fn mean_pause(&self) -> f64 {
        1.0 / self.lambda
    }
}

fn check_grid(grid: &[f64], cells: usize) -> Result<()> {
    if grid.len() != cells + 1 || cells == 0 {
        return Err(Error::GridMismatch);
    }
    if grid.iter().any(|g| !g.is_finite()) || grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::UnorderedBreakpoints("grid must increase strictly".into()));
    }
    Ok(())
}

fn weighted_sum(grid: &[f64], per_cell: &[f64]) -> f64 {
    grid.windows(2).zip(per_cell).map(|(w, v)| v * (w[1] - w[0])).sum()
}

/// Relative load of a periodic one-step strategy: the fraction of time each
/// cell spends inside the viewing window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawLoadProfile")]
pub struct LoadProfile {
    grid: Vec<f64>,
    phi: Vec<f64>,
}

#[derive(Deserialize)]
struct RawLoadProfile {
    grid: Vec<f64>,
    phi: Vec<f64>,
}

impl TryFrom<RawLoadProfile> for LoadProfile {
    type Error = Error;

    fn try_from(raw: RawLoadProfile) -> Result<Self> {
        Self::new(raw.grid, raw.phi)
    }
}

impl LoadProfile {
    pub fn new(grid: Vec<f64>, phi: Vec<f64>) -> Result<Self> {
        check_grid(&grid, phi.len())?;
        if let Some((index, &value)) =
            phi.iter().enumerate().find(|(_, p)| !(p.is_finite() && (0.0..=1.0).contains(*p)))
        {
            return Err(Error::NegativeDensity { index, value });
        }
        Ok(Self { grid, phi })
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn phi(&self) -> &[f64] {
        &self.phi
    }

    /// `∫ φ dx`, which equals the window width ε for a valid profile.
    pub fn budget(&self) -> f64 {
        weighted_sum(&self.grid, &self.phi)
    }
}

/// Cumulative in-window time `α(x, t)` per cell at elapsed time `t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawCumulativeLoad")]
pub struct CumulativeLoad {
    grid: Vec<f64>,
    t: f64,
    alpha: Vec<f64>,
}

#[derive(Deserialize)]
struct RawCumulativeLoad {
    grid: Vec<f64>,
    t: f64,
    alpha: Vec<f64>,
}

impl TryFrom<RawCumulativeLoad> for CumulativeLoad {
    type Error = Error;

    fn try_from(raw: RawCumulativeLoad) -> Result<Self> {
        Self::new(raw.grid, raw.t, raw.alpha)
    }
}

impl CumulativeLoad {
    pub fn new(grid: Vec<f64>, t: f64, alpha: Vec<f64>) -> Result<Self> {
        check_grid(&grid, alpha.len())?;
        if !(t.is_finite() && t >= 0.0) {
            return Err(Error::InvalidScenario(format!("elapsed time {t} must be nonnegative")));
        }
        if let Some((index, &value)) =
            alpha.iter().enumerate().find(|(_, a)| !(a.is_finite() && **a >= 0.0 && **a <= t))
        {
            return Err(Error::NegativeDensity { index, value });
        }
        Ok(Self { grid, t, alpha })
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    /// `∫ α dx`, which equals `ε·t` for a valid load.
    pub fn budget(&self) -> f64 {
        weighted_sum(&self.grid, &self.alpha)
    }
}

/// Strictly decreasing aperture widths `l_0 > l_1 > … > l_m > 0`.
///
/// `l_0` is the full search length and `l_m` the target accuracy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawLadder")]
pub struct ApertureLadder {
    widths: Vec<f64>,
    m: usize,
}

#[derive(Deserialize)]
struct RawLadder {
    widths: Vec<f64>,
    m: Option<usize>,
}

impl TryFrom<RawLadder> for ApertureLadder {
    type Error = Error;

    fn try_from(raw: RawLadder) -> Result<Self> {
        let ladder = Self::new(raw.widths)?;
        match raw.m {
            Some(m) if m != ladder.m => Err(Error::LadderInvalid(format!(
                "m = {m} but {} widths were given",
                ladder.widths.len()
            ))),
            _ => Ok(ladder),
        }
    }
}

impl ApertureLadder {
    pub fn new(widths: Vec<f64>) -> Result<Self> {
        if widths.len() < 2 {
            return Err(Error::LadderInvalid("a ladder needs at least l_0 and l_m".into()));
        }
        if widths.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(Error::LadderInvalid("widths must be positive".into()));
        }
        if widths.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::LadderInvalid("widths must decrease strictly".into()));
        }
        let m = widths.len() - 1;
        Ok(Self { widths, m })
    }

    pub fn widths(&self) -> &[f64] {
        &self.widths
    }

    /// Number of scanning steps `m`.
    pub fn steps(&self) -> usize {
        self.m
    }

    pub fn full_length(&self) -> f64 {
        self.widths[0]
    }

    pub fn accuracy(&self) -> f64 {
        self.widths[self.m]
    }

    /// Ratios `l_{i-1} / l_i` for `i = 1..=m`.
    pub fn ratios(&self) -> Vec<f64> {
        self.widths.windows(2).map(|w| w[0] / w[1]).collect()
    }

    /// The same ladder with every width multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.widths.iter().map(|w| w * factor).collect())
    }
}

/// Binary matrix `x_ij`: column `j` lists which receivers watch segment `j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawCodebook")]
pub struct ReceiverCodebook {
    n: usize,
    n_segments: usize,
    matrix: Vec<Vec<u8>>,
}

#[derive(Deserialize)]
struct RawCodebook {
    n: usize,
    n_segments: usize,
    matrix: Vec<Vec<u8>>,
}

impl TryFrom<RawCodebook> for ReceiverCodebook {
    type Error = Error;

    fn try_from(raw: RawCodebook) -> Result<Self> {
        if raw.n_segments != raw.matrix.len() {
            return Err(Error::InvalidScenario(format!(
                "n_segments = {} but the matrix has {} columns",
                raw.n_segments,
                raw.matrix.len()
            )));
        }
        Self::from_columns(raw.n, raw.matrix)
    }
}

/// Largest receiver count with a dense codebook.
pub const MAX_RECEIVERS: usize = 16;

impl ReceiverCodebook {
    /// Validates that every column is a nonzero binary word of length `n`
    /// and that no two columns coincide.
    pub fn from_columns(n: usize, columns: Vec<Vec<u8>>) -> Result<Self> {
        if n == 0 || n > MAX_RECEIVERS {
            return Err(Error::NOutOfRange(n));
        }
        let capacity = (1usize << n) - 1;
        if columns.len() > capacity {
            return Err(Error::InvalidScenario(format!(
                "{} segments exceed the {capacity} distinguishable responses of {n} receivers",
                columns.len()
            )));
        }
        let mut seen = HashSet::with_capacity(columns.len());
        for (j, col) in columns.iter().enumerate() {
            if col.len() != n || col.iter().any(|&b| b > 1) {
                return Err(Error::InvalidScenario(format!("column {} is not an {n}-bit word", j + 1)));
            }
            let code = col.iter().fold(0u32, |acc, &b| (acc << 1) | u32::from(b));
            if code == 0 {
                return Err(Error::ZeroResponse);
            }
            if !seen.insert(code) {
                return Err(Error::InvalidScenario(format!("column {} repeats an earlier column", j + 1)));
            }
        }
        Ok(Self { n, n_segments: columns.len(), matrix: columns })
    }

    pub fn receivers(&self) -> usize {
        self.n
    }

    pub fn segments(&self) -> usize {
        self.n_segments
    }

    pub fn columns(&self) -> &[Vec<u8>] {
        &self.matrix
    }

    /// Column for segment `j` (1-based).
    pub fn column(&self, j: usize) -> Option<&[u8]> {
        j.checked_sub(1).and_then(|i| self.matrix.get(i)).map(Vec::as_slice)
    }

    /// Whether receiver `i` (1-based) watches segment `j` (1-based).
    pub fn observes(&self, i: usize, j: usize) -> bool {
        self.column(j).and_then(|c| c.get(i.wrapping_sub(1))).is_some_and(|&b| b == 1)
    }

    /// The response the receivers produce for a pulse from segment `j`.
    pub fn response_for(&self, j: usize) -> Option<ReceiverResponse> {
        self.column(j).map(|c| ReceiverResponse { bits: c.iter().map(|&b| b == 1).collect() })
    }
}

/// Registration flags `r_1..r_n` of the receivers for one pulse.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReceiverResponse {
    pub bits: Vec<bool>,
}

impl ReceiverResponse {
    pub fn new(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    pub fn is_registration(&self) -> bool {
        self.bits.iter().any(|&b| b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StageRegime {
    /// Full-coverage windows `W_m = L/(2^n-1)^(m-1)`; mean time `M/λ`.
    Saturated,
    /// Windows of constant ratio ending at `(2^n-1)·ε`.
    Geometric,
}

/// Multi-receiver schedule: `M` stages with aggregate windows `W_1..W_M`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StagePlan {
    pub n: usize,
    #[serde(rename = "M")]
    pub stages: usize,
    pub windows: Vec<f64>,
    pub epsilon: f64,
    /// Width of the final localized segment, `W_M/(2^n-1)`; never above `epsilon`.
    pub achieved_accuracy: f64,
    pub interval_length: f64,
    pub mean_time: f64,
    pub regime: StageRegime,
}

impl StagePlan {
    pub fn segments_per_window(&self) -> usize {
        (1usize << self.n) - 1
    }

    pub fn check(&self) -> Result<()> {
        let invalid = |msg: String| Err(Error::InvalidScenario(msg));
        if self.n == 0 || self.n > MAX_RECEIVERS {
            return Err(Error::NOutOfRange(self.n));
        }
        if self.stages == 0 || self.windows.len() != self.stages {
            return invalid(format!("M = {} with {} windows", self.stages, self.windows.len()));
        }
        if self.windows.windows(2).any(|w| w[1] >= w[0]) {
            return invalid("windows must decrease strictly".into());
        }
        if self.windows[0] > self.interval_length * (1.0 + LENGTH_RTOL) || self.windows[0] <= 0.0 {
            return invalid("W_1 must lie in (0, L]".into());
        }
        let k = self.segments_per_window() as f64;
        let last = self.windows[self.stages - 1];
        if !same_length(last, k * self.achieved_accuracy) {
            return invalid("W_M must equal (2^n-1) times the achieved accuracy".into());
        }
        if self.achieved_accuracy > self.epsilon * (1.0 + 1e-9) {
            return invalid("achieved accuracy exceeds the requested accuracy".into());
        }
        Ok(())
    }
}

/// Sample statistics of simulated localization times.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialStats {
    pub trials: u64,
    pub mean: f64,
    pub stderr: f64,
    /// Half-width of the normal 95% confidence interval.
    pub ci95: f64,
    /// Pulses emitted by in-region sources during each stage, summed over trials.
    pub stage_pulses: Vec<u64>,
    /// Registered pulses per stage, summed over trials.
    pub stage_registrations: Vec<u64>,
}

impl TrialStats {
    /// Registered fraction of pulses during `stage` (0-based).
    pub fn registration_rate(&self, stage: usize) -> Option<f64> {
        let pulses = *self.stage_pulses.get(stage)?;
        (pulses > 0).then(|| self.stage_registrations[stage] as f64 / pulses as f64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_model_is_accepted() {
        let model = SourceModel::uniform(1.0, 1.0).unwrap();
        assert_eq!(model.prior.values(), &[1.0]);
        assert_eq!(model.mean_pause(), 1.0);
    }

    #[test]
    fn zero_lambda_is_rejected() {
        let err = SourceModel::uniform(0.0, 1.0).unwrap_err();
        assert_eq!(err.name(), "NonPositiveLambda");
    }

    #[test]
    fn non_positive_length_is_rejected() {
        let model = SourceModel {
            lambda: 1.0,
            prior: PriorDensity::uniform(1.0).unwrap(),
            interval_length: -2.0,
        };
        assert_eq!(model.validate().unwrap_err().name(), "NonPositiveLength");
    }

    #[test]
    fn piecewise_prior_is_renormalized() {
        let prior = PriorDensity::piecewise(vec![0.0, 0.5, 1.0], vec![2.0, 2.0]).unwrap();
        assert_eq!(prior.values(), &[1.0, 1.0]);
        assert!((prior.total_mass() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn negative_density_and_unordered_breakpoints() {
        let err = PriorDensity::piecewise(vec![0.0, 0.5, 1.0], vec![1.0, -0.1]).unwrap_err();
        assert_eq!(err.name(), "NegativeDensity");
        let err = PriorDensity::piecewise(vec![0.0, 0.7, 0.5], vec![1.0, 1.0]).unwrap_err();
        assert_eq!(err.name(), "UnorderedBreakpoints");
    }

    #[test]
    fn prior_json_round_trip_renormalizes() {
        let json = r#"{"kind":"PiecewiseConstant","breakpoints":[0,0.5,1],"values":[3,1]}"#;
        let prior: PriorDensity = serde_json::from_str(json).unwrap();
        assert_eq!(prior.values(), &[1.5, 0.5]);
        let back: PriorDensity = serde_json::from_str(&serde_json::to_string(&prior).unwrap()).unwrap();
        assert_eq!(back, prior);
    }

    #[test]
    fn quantile_inverts_the_cdf() {
        let prior = PriorDensity::piecewise(vec![0.0, 0.25, 1.0], vec![2.0, 0.0]).unwrap();
        assert!((prior.quantile(0.5) - 0.125).abs() < 1e-15);
        assert!(prior.quantile(0.999_999) < 0.25);
        assert!((prior.mass_between(0.0, 0.125) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn ladder_rejects_non_decreasing_widths() {
        assert!(ApertureLadder::new(vec![1.0, 0.5, 0.5]).is_err());
        assert!(ApertureLadder::new(vec![1.0]).is_err());
        let json = r#"{"widths":[1.0,0.26,0.1],"m":3}"#;
        assert!(serde_json::from_str::<ApertureLadder>(json).is_err());
        let json = r#"{"widths":[1.0,0.26,0.1],"m":2}"#;
        assert_eq!(serde_json::from_str::<ApertureLadder>(json).unwrap().steps(), 2);
    }

    #[test]
    fn codebook_rejects_duplicate_and_zero_columns() {
        let err = ReceiverCodebook::from_columns(2, vec![vec![0, 1], vec![0, 1]]).unwrap_err();
        assert_eq!(err.name(), "InvalidScenario");
        let err = ReceiverCodebook::from_columns(2, vec![vec![0, 0]]).unwrap_err();
        assert_eq!(err.name(), "ZeroResponse");
        let err = ReceiverCodebook::from_columns(1, vec![vec![1], vec![1]]).unwrap_err();
        assert_eq!(err.name(), "InvalidScenario");
    }

    #[test]
    fn load_profile_bounds() {
        assert!(LoadProfile::new(vec![0.0, 1.0], vec![1.2]).is_err());
        assert!(LoadProfile::new(vec![0.0, 1.0], vec![0.3, 0.3]).is_err());
        let p = LoadProfile::new(vec![0.0, 0.5, 1.0], vec![0.4, 0.2]).unwrap();
        assert!((p.budget() - 0.3).abs() < 1e-15);
    }

    #[test]
    fn cumulative_load_respects_elapsed_time() {
        assert!(CumulativeLoad::new(vec![0.0, 1.0], 1.0, vec![1.5]).is_err());
        assert!(CumulativeLoad::new(vec![0.0, 1.0], 1.0, vec![0.5]).is_ok());
    }
}
