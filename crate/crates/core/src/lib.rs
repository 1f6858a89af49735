//! Time-optimal search plans for point sources that emit Poisson pulses.
//!
//! A receiver observes a window of the search interval and registers a
//! pulse only when the emitting source is inside it. This crate computes
//! how to move and shrink that window:
//!
//! * [`single`]: one source, one receiver. Optimal periodic and cumulative
//!   loads for an arbitrary prior, the uniform multistep ladder, and
//!   dichotomy / trichotomy plans.
//! * [`multi_target`]: several identical sources. The in-aperture count law
//!   and the optimal aperture ladder.
//! * [`multi_receiver`]: several receivers with binary-coded viewing zones.
//!   Codebooks and the optimal stage plans.
//! * [`oracle`]: Monte Carlo and numerical-optimization ground truth.
//! * [`sim`]: event-driven simulation of any plan.

pub mod error;
pub mod model;
pub mod multi_receiver;
pub mod multi_target;
pub mod oracle;
pub mod sim;
pub mod single;
pub mod stream;

pub use error::{Error, Result};
pub use model::{
    ApertureLadder, CumulativeLoad, DensityKind, LoadProfile, PriorDensity, ReceiverCodebook, ReceiverResponse,
    SourceModel, StagePlan, StageRegime, TrialStats, MAX_RECEIVERS,
};
pub use multi_receiver::{
    boundary_continuity, build_codebook, decode_segment, mean_time_multistage, plan_multistage, regime_boundaries, saturation_point,
    segment_count, single_receiver_regime, single_tact_accuracy, transition_point, BoundaryCheck, RegimeBounds,
};
pub use multi_target::{
    aperture_count_distribution, composition_invariance_check, optimize_ladder, prob_k_in_aperture,
    solve_ladder_for_steps, step_mean_time, total_mean_time, CompositionCheck, LadderSolution,
};
pub use oracle::{
    constrained_minimizer, mc_count_distribution, mc_prob_k, mc_region_probability, objective_total, ExpLoad,
    InverseLoad, McEstimate, SeparableObjective,
};
pub use sim::{
    run_multireceiver_trial, run_trial, run_trials, Arc, PlanSpec, PulseEvent, Scenario, SimMode, TrialTrace,
};
pub use single::{
    compare_strategies, dichotomy_plan, discrete_beta_weights, general_onestep_alpha, multistep_mean_time,
    periodic_load_profile, periodic_mean_time, trichotomy_plan, uniform_multistep_ladder, SectionLevel, SectionPlan,
    StrategyComparison, UniformLadderPlan,
};
