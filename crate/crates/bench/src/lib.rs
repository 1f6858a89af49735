//! Shared fixtures for the benchmarks.

use pulse_seek::{ApertureLadder, PlanSpec, PriorDensity, Scenario, SourceModel};

/// A piecewise prior with `cells` pieces of alternating height.
pub fn stepped_prior(cells: usize) -> PriorDensity {
    let breakpoints = (0..=cells).map(|i| i as f64 / cells as f64).collect();
    let values = (0..cells).map(|i| if i % 2 == 0 { 3.0 } else { 1.0 }).collect();
    PriorDensity::piecewise(breakpoints, values).expect("valid prior")
}

/// Single-source uniform-prior scan over `widths` on the unit interval.
pub fn ladder_scenario(widths: Vec<f64>, sources: usize, trials: u64) -> Scenario {
    let model = SourceModel::uniform(1.0, 1.0).expect("valid model");
    let ladder = ApertureLadder::new(widths).expect("valid ladder");
    Scenario::new(model, PlanSpec::Ladder(ladder), trials, 42)
        .and_then(|s| s.with_sources(sources))
        .expect("valid scenario")
}
