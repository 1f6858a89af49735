//! Event-driven simulation of search plans against Poisson pulsed sources.
//!
//! A trial draws source positions from the prior and then walks the plan
//! stage by stage, generating pulses one at a time. A pulse is registered
//! when its source lies under the window at the pulse instant; the
//! registration narrows the search region as the plan prescribes.
//!
//! Two window realizations are available. In [`SimMode::Thinning`] the
//! window offset at each pulse is uniform over the segment, which is what a
//! constant-speed cyclic sweep looks like to a pulse arriving at an
//! independent random time. In [`SimMode::Literal`] the window position is a
//! deterministic function of time (one aperture width per `dwell`), so the
//! thinning assumption can be cross-checked.
//!
//! Only sources inside the current region are given pulse streams: pulses
//! from sources outside it are missed by construction and, the streams being
//! memoryless, do not change the timing of in-region pulses.

mod region;
mod stats;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{same_length, ApertureLadder, ReceiverResponse, SourceModel, StagePlan};
use crate::multi_receiver::{build_codebook, decode_segment};
use crate::single::SectionPlan;
use crate::stream::TrialStreams;

pub use region::{Arc, Region};
pub use stats::run_trials;

/// Default literal-sweep dwell per aperture width, in units of `1/λ`.
pub const DEFAULT_DWELL: f64 = 1e-4;

/// The plan a scenario executes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PlanSpec {
    /// Uniform cyclic scan with the ladder's aperture widths.
    Ladder(ApertureLadder),
    /// Recursive k-section with prior-dependent visiting weights.
    Section(SectionPlan),
    /// Multi-receiver stage plan.
    Stages(StagePlan),
}

impl PlanSpec {
    /// Width of the segment left when the plan completes.
    pub fn final_width(&self) -> f64 {
        match self {
            PlanSpec::Ladder(l) => l.accuracy(),
            PlanSpec::Section(s) => s.final_width(),
            PlanSpec::Stages(p) => p.achieved_accuracy,
        }
    }

    pub fn stage_count(&self) -> usize {
        match self {
            PlanSpec::Ladder(l) => l.steps(),
            PlanSpec::Section(s) => s.depth(),
            PlanSpec::Stages(p) => p.stages,
        }
    }

    fn interval_length(&self) -> f64 {
        match self {
            PlanSpec::Ladder(l) => l.full_length(),
            PlanSpec::Section(s) => s.interval_length(),
            PlanSpec::Stages(p) => p.interval_length,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SimMode {
    #[default]
    Thinning,
    Literal,
}

/// Everything needed to reproduce a batch of trials.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawScenario")]
pub struct Scenario {
    pub model: SourceModel,
    pub n_sources: usize,
    pub plan: PlanSpec,
    pub trials: u64,
    pub seed: u64,
    pub mode: SimMode,
    /// Literal-sweep time per aperture width; defaults to `1e-4/λ`.
    pub dwell: Option<f64>,
    /// Requested accuracy; defaults to the plan's own final width.
    pub epsilon: Option<f64>,
}

#[derive(Deserialize)]
struct RawScenario {
    model: SourceModel,
    #[serde(default = "one")]
    n_sources: usize,
    plan: PlanSpec,
    trials: u64,
    seed: u64,
    #[serde(default)]
    mode: SimMode,
    dwell: Option<f64>,
    epsilon: Option<f64>,
}

fn one() -> usize {
    1
}

impl TryFrom<RawScenario> for Scenario {
    type Error = Error;

    fn try_from(raw: RawScenario) -> Result<Self> {
        Scenario {
            model: raw.model,
            n_sources: raw.n_sources,
            plan: raw.plan,
            trials: raw.trials,
            seed: raw.seed,
            mode: raw.mode,
            dwell: raw.dwell,
            epsilon: raw.epsilon,
        }
        .validate()
    }
}

impl Scenario {
    /// Single-source thinning scenario.
    pub fn new(model: SourceModel, plan: PlanSpec, trials: u64, seed: u64) -> Result<Self> {
        Scenario { model, n_sources: 1, plan, trials, seed, mode: SimMode::Thinning, dwell: None, epsilon: None }
            .validate()
    }

    pub fn with_sources(self, n_sources: usize) -> Result<Self> {
        Scenario { n_sources, ..self }.validate()
    }

    pub fn with_mode(self, mode: SimMode) -> Result<Self> {
        Scenario { mode, ..self }.validate()
    }

    pub fn with_trials(self, trials: u64, seed: u64) -> Result<Self> {
        Scenario { trials, seed, ..self }.validate()
    }

    pub fn validate(self) -> Result<Self> {
        let invalid = |msg: String| Err(Error::InvalidScenario(msg));
        let model = self.model.validate()?;
        if self.trials == 0 {
            return invalid("trials must be at least 1".into());
        }
        if self.n_sources == 0 {
            return invalid("at least one source is required".into());
        }
        if self.n_sources > 1 && !matches!(self.plan, PlanSpec::Ladder(_)) {
            return invalid("only ladder scans support several sources".into());
        }
        if !same_length(self.plan.interval_length(), model.interval_length) {
            return invalid(format!(
                "plan is built for length {} but the interval length is {}",
                self.plan.interval_length(),
                model.interval_length
            ));
        }
        if let PlanSpec::Stages(p) = &self.plan {
            p.check()?;
        }
        if self.plan.final_width() > model.interval_length * (1.0 + 1e-12) {
            return invalid("plan accuracy exceeds the interval length".into());
        }
        if let Some(d) = self.dwell {
            if !(d.is_finite() && d > 0.0) {
                return invalid(format!("dwell {d} must be positive"));
            }
        }
        if let Some(e) = self.epsilon {
            if !(e.is_finite() && e > 0.0) {
                return Err(Error::EpsilonOutOfRange { epsilon: e, length: model.interval_length });
            }
        }
        Ok(Scenario { model, ..self })
    }

    pub fn requested_accuracy(&self) -> f64 {
        self.epsilon.unwrap_or_else(|| match &self.plan {
            PlanSpec::Stages(p) => p.epsilon,
            plan => plan.final_width(),
        })
    }

    fn dwell_time(&self) -> f64 {
        self.dwell.unwrap_or(DEFAULT_DWELL / self.model.lambda)
    }
}

/// One emitted pulse.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PulseEvent {
    pub time: f64,
    /// Position of the emitting source in the original interval.
    pub position: f64,
    pub registered: bool,
    /// 0-based plan stage during which the pulse was emitted.
    pub stage: usize,
    /// Start of the window in the original interval.
    pub window_start: f64,
    pub window_width: f64,
}

/// Full record of one simulated trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialTrace {
    pub trial_index: u64,
    pub sources: Vec<f64>,
    /// Index into `sources` of the source whose pulse completed the search.
    pub located: usize,
    pub events: Vec<PulseEvent>,
    pub final_interval: Vec<Arc>,
    pub final_width: f64,
    pub elapsed: f64,
    pub stage_pulses: Vec<u64>,
    pub stage_registrations: Vec<u64>,
}

impl TrialTrace {
    /// Whether the located source lies in the final interval.
    pub fn localized_correctly(&self) -> bool {
        if self.sources.is_empty() {
            return true;
        }
        let x = self.sources[self.located];
        let slack = 8.0 * f64::EPSILON * x.abs().max(1.0);
        self.final_interval.iter().any(|a| x >= a.start - slack && x <= a.end() + slack)
    }
}

/// Simulates trial `trial_index` of `scenario`.
pub fn run_trial(scenario: &Scenario, trial_index: u64) -> Result<TrialTrace> {
    simulate(scenario, &TrialStreams::new(scenario.seed), trial_index, true)
}

/// Simulates one trial of a stage-plan scenario.
pub fn run_multireceiver_trial(scenario: &Scenario, trial_index: u64) -> Result<TrialTrace> {
    if !matches!(scenario.plan, PlanSpec::Stages(_)) {
        return Err(Error::InvalidScenario("a multi-receiver trial needs a stage plan".into()));
    }
    run_trial(scenario, trial_index)
}

pub(crate) fn simulate(
    scenario: &Scenario,
    streams: &TrialStreams,
    trial_index: u64,
    record: bool,
) -> Result<TrialTrace> {
    let mut rng = streams.trial(trial_index);
    let prior = &scenario.model.prior;
    let sources: Vec<f64> = (0..scenario.n_sources).map(|_| prior.quantile(rng.random())).collect();
    let mut sim = Trial {
        rng,
        lambda: scenario.model.lambda,
        mode: scenario.mode,
        dwell: scenario.dwell_time(),
        record,
        time: 0.0,
        events: Vec::new(),
        pulses: vec![0; scenario.plan.stage_count()],
        registrations: vec![0; scenario.plan.stage_count()],
    };
    let length = scenario.model.interval_length;
    let (final_interval, located) = match &scenario.plan {
        PlanSpec::Ladder(ladder) => sim.ladder(ladder, &sources, length)?,
        PlanSpec::Section(plan) => (sim.section(plan, sources[0])?, 0),
        PlanSpec::Stages(plan) => (sim.stages(plan, sources[0], length)?, 0),
    };
    let final_width: f64 = final_interval.iter().map(|a| a.width).sum();
    let requested = scenario.requested_accuracy();
    if final_width > requested * (1.0 + 1e-9) {
        return Err(Error::PlanExhausted { width: final_width, epsilon: requested });
    }
    Ok(TrialTrace {
        trial_index,
        sources,
        located,
        events: sim.events,
        final_interval,
        final_width,
        elapsed: sim.time,
        stage_pulses: sim.pulses,
        stage_registrations: sim.registrations,
    })
}

struct Trial {
    rng: ChaCha8Rng,
    lambda: f64,
    mode: SimMode,
    dwell: f64,
    record: bool,
    time: f64,
    events: Vec<PulseEvent>,
    pulses: Vec<u64>,
    registrations: Vec<u64>,
}

impl Trial {
    /// Advances to the next pulse among `active` sources; returns the index
    /// of the emitting source.
    fn next_pulse(&mut self, active: usize) -> usize {
        let pause = Exp::new(self.lambda * active as f64).expect("positive rate");
        self.time += pause.sample(&mut self.rng);
        if active == 1 {
            0
        } else {
            self.rng.random_range(0..active)
        }
    }

    /// Window offset within a cyclic segment of width `segment` for a window
    /// of width `window` that started sweeping at `since`.
    fn offset(&mut self, segment: f64, window: f64, since: f64) -> f64 {
        if window >= segment {
            return 0.0;
        }
        match self.mode {
            SimMode::Thinning => self.rng.random::<f64>() * segment,
            SimMode::Literal => ((self.time - since) * window / self.dwell).rem_euclid(segment),
        }
    }

    fn log(&mut self, stage: usize, position: f64, registered: bool, start: f64, width: f64) {
        self.pulses[stage] += 1;
        if registered {
            self.registrations[stage] += 1;
        }
        if self.record {
            self.events.push(PulseEvent {
                time: self.time,
                position,
                registered,
                stage,
                window_start: start,
                window_width: width,
            });
        }
    }

    /// Sweeps `window` over `region` until a source pulse is registered.
    /// `virt` holds each in-region source as (source index, virtual
    /// coordinate). Returns the window offset and the registered entry.
    fn sweep(
        &mut self,
        stage: usize,
        region: &Region,
        window: f64,
        virt: &[(usize, f64)],
        sources: &[f64],
    ) -> (f64, usize) {
        let segment = region.width();
        let since = self.time;
        loop {
            let who = self.next_pulse(virt.len());
            let offset = self.offset(segment, window, since);
            let v = virt[who].1;
            let registered = window >= segment || (v - offset).rem_euclid(segment) < window;
            let start = if self.record { region.locate(offset) } else { 0.0 };
            self.log(stage, sources[virt[who].0], registered, start, window.min(segment));
            if registered {
                return (offset, who);
            }
        }
    }

    fn ladder(&mut self, ladder: &ApertureLadder, sources: &[f64], length: f64) -> Result<(Vec<Arc>, usize)> {
        let mut region = Region::interval(0.0, length);
        let mut virt: Vec<(usize, f64)> = sources.iter().copied().enumerate().collect();
        let mut located = 0;
        for (stage, &window) in ladder.widths()[1..].iter().enumerate() {
            let segment = region.width();
            let (offset, who) = self.sweep(stage, &region, window, &virt, sources);
            located = virt[who].0;
            virt = virt
                .into_iter()
                .filter_map(|(i, v)| {
                    let shifted = (v - offset).rem_euclid(segment);
                    (shifted < window).then_some((i, shifted))
                })
                .collect();
            region = region.slice(offset, window);
            debug_assert!(virt.iter().any(|(i, _)| *i == located));
        }
        Ok((region.into_arcs(), located))
    }

    fn section(&mut self, plan: &SectionPlan, x: f64) -> Result<Vec<Arc>> {
        let (mut start, mut width) = (0.0, plan.interval_length());
        for stage in 0..plan.depth() {
            let level = plan.level(start, width);
            let part = level.sub_width();
            let home = level.child_index(x);
            if level.beta[home] <= 0.0 {
                return Err(Error::InvalidScenario(format!(
                    "source at {x} lies in a sub-segment the plan never visits"
                )));
            }
            let cumulative: Vec<f64> = level
                .beta
                .iter()
                .scan(0.0, |acc, b| {
                    *acc += b;
                    Some(*acc)
                })
                .collect();
            let since = self.time;
            let period = level.beta.len() as f64 * self.dwell;
            loop {
                self.next_pulse(1);
                let phase = match self.mode {
                    SimMode::Thinning => self.rng.random::<f64>(),
                    SimMode::Literal => ((self.time - since) / period).fract(),
                };
                let visited = cumulative
                    .iter()
                    .position(|c| phase < *c)
                    .unwrap_or(level.beta.len() - 1);
                let registered = visited == home;
                self.log(stage, x, registered, start + visited as f64 * part, part);
                if registered {
                    break;
                }
            }
            start += home as f64 * part;
            width = part;
        }
        Ok(vec![Arc { start, width }])
    }

    fn stages(&mut self, plan: &StagePlan, x: f64, length: f64) -> Result<Vec<Arc>> {
        let codebook = build_codebook(plan.n)?;
        let k = codebook.segments();
        let mut region = Region::interval(0.0, length);
        let mut v = x;
        for (stage, &window) in plan.windows.iter().enumerate() {
            let segment = region.width();
            let window = window.min(segment);
            let (offset, _) = self.sweep(stage, &region, window, &[(0, v)], &[x]);
            let covered = region.slice(offset, window);
            let inside = (v - offset).rem_euclid(segment).min(window);
            let piece = window / k as f64;
            let emitting = ((inside / piece).floor() as usize).min(k - 1) + 1;
            let bits = (1..=plan.n).map(|i| codebook.observes(i, emitting)).collect();
            let decoded = decode_segment(&codebook, &ReceiverResponse::new(bits))?;
            if decoded != emitting {
                return Err(Error::DecodeError { expected: emitting, decoded });
            }
            let from = (decoded - 1) as f64 * piece;
            region = covered.slice(from, piece);
            v = inside - from;
        }
        Ok(region.into_arcs())
    }
}
