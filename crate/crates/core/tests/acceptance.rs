//! Acceptance suite: one PASS/FAIL line per criterion, details for misses.
//!
//! Runs without the libtest harness so the report is always printed; the
//! process exits non-zero when any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use pulse_seek::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Outcome of one criterion: failing detail lines and informational notes.
#[derive(Default)]
struct Report {
    misses: Vec<String>,
    notes: Vec<String>,
}

impl Report {
    fn check(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        if !ok {
            self.misses.push(detail());
        }
    }

    fn note(&mut self, line: String) {
        self.notes.push(line);
    }

    fn within(&mut self, limit: Duration, started: Instant, what: &str) {
        let took = started.elapsed();
        self.note(format!("{what} runtime {:.2}s (limit {}s)", took.as_secs_f64(), limit.as_secs()));
        self.check(took < limit, || format!("{what} took {took:?}, limit {limit:?}"));
    }
}

// ---------------------------------------------------------------------------
// 1. Optimal multi-target ladders.

const TABLE_TAU_TOL: f64 = 0.05;
const TABLE_RUNG_TOL: f64 = 0.01;

struct Cell {
    eps: f64,
    n: usize,
    m: usize,
    rungs: &'static [f64],
    tau: f64,
}

const fn cell(eps: f64, n: usize, m: usize, rungs: &'static [f64], tau: f64) -> Cell {
    Cell { eps, n, m, rungs, tau }
}

/// Printed optimal ladders `l_1..l_m` (as fractions of the circle) and `λ⟨τ⟩`.
const TABLE1: &[Cell] = &[
    cell(1e-1, 2, 2, &[0.26, 0.1], 4.19),
    cell(1e-1, 3, 2, &[0.24, 0.1], 3.26),
    cell(1e-1, 5, 1, &[0.1], 2.0),
    cell(1e-1, 10, 1, &[0.1], 1.0),
    cell(1e-1, 30, 1, &[0.1], 0.33),
    cell(1e-1, 50, 1, &[0.1], 0.2),
    cell(1e-2, 2, 4, &[0.23, 0.08, 0.03, 0.01], 10.22),
    cell(1e-2, 3, 4, &[0.19, 0.07, 0.03, 0.01], 9.02),
    cell(1e-2, 5, 3, &[0.09, 0.03, 0.01], 7.55),
    cell(1e-2, 10, 3, &[0.07, 0.03, 0.01], 5.73),
    cell(1e-2, 30, 1, &[0.01], 3.33),
    cell(1e-2, 50, 1, &[0.01], 2.0),
    cell(1e-3, 2, 6, &[0.21, 0.07, 0.024, 0.008, 0.003, 0.001], 16.48),
    cell(1e-3, 3, 6, &[0.16, 0.06, 0.02, 0.007, 0.003, 0.001], 15.22),
    cell(1e-3, 5, 6, &[0.12, 0.043, 0.016, 0.006, 0.003, 0.001], 13.76),
    cell(1e-3, 10, 5, &[0.06, 0.02, 0.007, 0.003, 0.001], 11.76),
    cell(1e-3, 30, 4, &[0.02, 0.007, 0.003, 0.001], 8.77),
    cell(1e-3, 50, 3, &[0.01, 0.003, 0.001], 7.42),
    cell(1e-4, 2, 9, &[0.24, 0.09, 0.03, 0.01, 0.005, 0.002, 0.0007, 0.0003, 0.0001], 22.74),
    cell(1e-4, 3, 8, &[0.15, 0.05, 0.02, 0.006, 0.002, 0.0008, 0.0003, 0.0001], 21.48),
    cell(1e-4, 5, 8, &[0.11, 0.04, 0.014, 0.005, 0.002, 0.0007, 0.0003, 0.0001], 19.97),
    cell(1e-4, 10, 7, &[0.05, 0.017, 0.006, 0.002, 0.0008, 0.0003, 0.0001], 18.0),
    cell(1e-4, 30, 6, &[0.018, 0.006, 0.002, 0.0008, 0.0003, 0.0001], 14.96),
    cell(1e-4, 50, 6, &[0.013, 0.005, 0.0017, 0.0007, 0.0003, 0.0001], 13.6),
];

fn criterion_1(r: &mut Report) {
    let started = Instant::now();
    for c in TABLE1 {
        let sol = match optimize_ladder(c.n, c.eps) {
            Ok(sol) => sol,
            Err(e) => {
                r.check(false, || format!("eps={} n={}: {e}", c.eps, c.n));
                continue;
            }
        };
        let rungs = &sol.ladder.widths()[1..];
        r.check(sol.m == c.m, || format!("eps={} n={}: m = {} expected {}", c.eps, c.n, sol.m, c.m));
        r.check((sol.mean_time - c.tau).abs() <= TABLE_TAU_TOL, || {
            format!("eps={} n={}: λτ = {:.4} expected {} ± {TABLE_TAU_TOL}", c.eps, c.n, sol.mean_time, c.tau)
        });
        if sol.m == c.m {
            for (i, (got, want)) in rungs.iter().zip(c.rungs).enumerate() {
                r.check((got - want).abs() <= TABLE_RUNG_TOL, || {
                    format!("eps={} n={}: l{} = {got:.5} expected {want} ± {TABLE_RUNG_TOL}", c.eps, c.n, i + 1)
                });
            }
        } else {
            r.check(false, || format!("eps={} n={}: rungs {rungs:.4?} expected {:?}", c.eps, c.n, c.rungs));
        }
    }
    r.within(Duration::from_secs(10), started, "table");
}

// ---------------------------------------------------------------------------
// 2. In-aperture count law against brute force.

const MC_TRIALS: u64 = 1_000_000;
const SIGMAS: f64 = 3.0;
const ORACLE_SEED: u64 = 7;

fn criterion_2(r: &mut Report) {
    let started = Instant::now();
    let mut cells = 0;
    for n in [2usize, 3, 5, 8] {
        for (li, l) in [0.1, 0.3, 0.5, 0.7].into_iter().enumerate() {
            let seed = ORACLE_SEED + 100 * n as u64 + li as u64;
            let sim = mc_count_distribution(n, l, MC_TRIALS, seed).expect("valid grid");
            for k in 1..=n {
                let exact = prob_k_in_aperture(n, k, l).unwrap();
                let est = &sim[k - 1];
                cells += 1;
                r.check(est.agrees_with(exact, SIGMAS), || {
                    format!("simulated n={n} k={k} l={l}: {:.6} ± {:.6} vs {exact:.6}", est.value, est.stderr)
                });
            }
            if n <= 4 {
                for k in 1..=n {
                    let exact = prob_k_in_aperture(n, k, l).unwrap();
                    let est = mc_region_probability(n, k, l, MC_TRIALS, seed + 50).unwrap();
                    cells += 1;
                    // The weighted estimator's own spread is the right scale here.
                    r.check((est.value - exact).abs() <= SIGMAS * est.stderr, || {
                        format!("region n={n} k={k} l={l}: {:.6} ± {:.6} vs {exact:.6}", est.value, est.stderr)
                    });
                }
            }
        }
    }
    r.note(format!("{cells} cells at {MC_TRIALS} trials"));
    r.within(Duration::from_secs(120), started, "oracle");
}

// ---------------------------------------------------------------------------
// 3. Composition identity.

fn criterion_3(r: &mut Report) {
    let mut rng = ChaCha8Rng::seed_from_u64(26);
    let mut worst: f64 = 0.0;
    for _ in 0..500 {
        let n = rng.random_range(1..=20);
        let l1 = rng.random_range(0.01..0.99);
        let l2 = l1 * rng.random_range(0.01..0.99);
        let check = composition_invariance_check(n, l1, l2).unwrap();
        let diff = check.max_abs_diff();
        worst = worst.max(diff);
        r.check(diff < 1e-12, || format!("n={n} l1={l1} l2={l2}: max diff {diff:e}"));
    }
    r.note(format!("worst difference {worst:e}"));
}

// ---------------------------------------------------------------------------
// 4. Loss constants of dichotomy and trichotomy.

const DICHOTOMY_LOSS_LITERAL: f64 = 0.061487;

fn criterion_4(r: &mut Report) {
    let e = std::f64::consts::E;
    let dichotomy = 2.0 / (e * std::f64::consts::LN_2) - 1.0;
    let trichotomy = (3.0 / 3f64.ln() - e) / e;
    for ratio in [10.0, 1e3, 1e6] {
        let c = compare_strategies(1.0, 1.0 / ratio, 1.0).unwrap();
        r.check((c.dichotomy_loss - dichotomy).abs() < 1e-12, || {
            format!("L/eps={ratio}: dichotomy loss {} vs closed form {dichotomy}", c.dichotomy_loss)
        });
        r.check((c.trichotomy_loss - trichotomy).abs() < 1e-12, || {
            format!("L/eps={ratio}: trichotomy loss {} vs closed form {trichotomy}", c.trichotomy_loss)
        });
        r.check((c.dichotomy_loss - DICHOTOMY_LOSS_LITERAL).abs() < 1e-12, || {
            format!(
                "L/eps={ratio}: dichotomy loss {:.10} vs stated constant {DICHOTOMY_LOSS_LITERAL} (diff {:.3e})",
                c.dichotomy_loss,
                (c.dichotomy_loss - DICHOTOMY_LOSS_LITERAL).abs()
            )
        });
    }
    r.note(format!("dichotomy loss {dichotomy:.10}, trichotomy loss {trichotomy:.10}"));
}

// ---------------------------------------------------------------------------
// 5-7. Simulation.

const SIM_TRIALS: u64 = 100_000;

fn simulate_against(r: &mut Report, label: &str, scenario: Scenario, expected: f64) -> TrialStats {
    let stats = run_trials(&scenario).expect("simulation runs");
    r.note(format!(
        "{label}: mean {:.4} ± {:.4} (expected {expected:.4}, {:.2}σ)",
        stats.mean,
        stats.stderr,
        (stats.mean - expected).abs() / stats.stderr
    ));
    r.check((stats.mean - expected).abs() <= SIGMAS * stats.stderr, || {
        format!("{label}: mean {:.4} ± {:.4} vs {expected:.4}", stats.mean, stats.stderr)
    });
    stats
}

fn criterion_5(r: &mut Report) {
    let model = SourceModel::uniform(1.0, 1.0).unwrap();
    for (ratio, seed) in [(10.0, 51), (100.0, 52), (1000.0, 53)] {
        let started = Instant::now();
        let plan = uniform_multistep_ladder(1.0, 1.0 / ratio, 1.0).unwrap();
        let steps = plan.ladder.steps();
        let expected = steps as f64 * f64::powf(ratio, 1.0 / steps as f64);
        let scenario = Scenario::new(model.clone(), PlanSpec::Ladder(plan.ladder), SIM_TRIALS, seed).unwrap();
        simulate_against(r, &format!("L/eps={ratio} ({steps} steps)"), scenario, expected);
        r.within(Duration::from_secs(60), started, &format!("L/eps={ratio}"));
    }
}

fn criterion_6(r: &mut Report) {
    let model = SourceModel::uniform(1.0, 1.0).unwrap();
    let ladder = ApertureLadder::new(vec![1.0, 0.26, 0.1]).unwrap();
    let analytic = total_mean_time(2, &ladder, 1.0).unwrap();
    r.note(format!("analytic λτ of the printed ladder {analytic:.4}"));
    let scenario = Scenario::new(model, PlanSpec::Ladder(ladder), SIM_TRIALS, 61).unwrap().with_sources(2).unwrap();
    simulate_against(r, "2 sources, ladder (1, 0.26, 0.1)", scenario, 4.19);
}

/// Closed-form rows of the optimal stage plans for `n` receivers.
struct Row {
    stages: usize,
    regime: StageRegime,
    lower: f64,
    upper: f64,
}

fn rows(n: usize, max_stages: usize) -> Vec<Row> {
    let k = segment_count(n) as f64;
    let mut out = Vec::new();
    for m in 1..=max_stages {
        let mf = m as f64;
        if n == 1 {
            let upper = if m == 1 { 1.0 } else { ((mf - 1.0) / mf).powf(mf * (mf - 1.0)) };
            out.push(Row { stages: m, regime: StageRegime::Geometric, lower: (mf / (mf + 1.0)).powf(mf * (mf + 1.0)), upper });
        } else {
            let upper = if m == 1 { 1.0 } else { ((mf - 1.0) / mf).powf(mf - 1.0) / k.powf(mf - 1.0) };
            out.push(Row { stages: m, regime: StageRegime::Saturated, lower: k.powf(-mf), upper });
            out.push(Row {
                stages: m,
                regime: StageRegime::Geometric,
                lower: (mf / (mf + 1.0)).powf(mf) / k.powf(mf),
                upper: k.powf(-mf),
            });
        }
    }
    out
}

fn expected_plan(n: usize, row: &Row, ratio: f64) -> (Vec<f64>, f64) {
    let k = segment_count(n) as f64;
    let m = row.stages as f64;
    match row.regime {
        StageRegime::Saturated => ((0..row.stages).map(|i| k.powi(-(i as i32))).collect(), m),
        StageRegime::Geometric => (
            (1..=row.stages).map(|i| k * ratio.powf(i as f64 / m)).collect(),
            m / k * ratio.powf(-1.0 / m),
        ),
    }
}

fn criterion_7(r: &mut Report) {
    let mut points = 0;
    for n in 1..=4 {
        for row in rows(n, 5) {
            for frac in [0.25, 0.5, 0.75] {
                // Interior point, spaced geometrically between the row's ends.
                let ratio = row.upper.powf(1.0 - frac) * row.lower.powf(frac);
                if ratio >= 1.0 {
                    continue;
                }
                points += 1;
                let plan = plan_multistage(n, 1.0, ratio, 1.0).unwrap();
                let (windows, tau) = expected_plan(n, &row, ratio);
                let label = format!("n={n} M={} {:?} eps/L={ratio:.4e}", row.stages, row.regime);
                r.check(plan.stages == row.stages && plan.regime == row.regime, || {
                    format!("{label}: got M={} {:?}", plan.stages, plan.regime)
                });
                r.check((plan.mean_time - tau).abs() <= 1e-9 * tau.max(1.0), || {
                    format!("{label}: λτ {} vs {tau}", plan.mean_time)
                });
                let same = plan.windows.len() == windows.len()
                    && plan.windows.iter().zip(&windows).all(|(a, b)| (a - b).abs() <= 1e-9 * b);
                r.check(same, || format!("{label}: windows {:?} vs {windows:?}", plan.windows));
            }
        }
        for b in boundary_continuity(n, 5).unwrap() {
            r.check(b.gap() <= 1e-9, || format!("n={n} boundary {:.4e}: gap {:e}", b.ratio, b.gap()));
        }
    }
    r.note(format!("{points} interior points"));

    let model = SourceModel::uniform(1.0, 1.0).unwrap();
    for (stages, eps, seed) in [(1usize, 0.5, 71), (2, 1.0 / 8.0, 72), (3, 0.04, 73)] {
        let plan = plan_multistage(2, 1.0, eps, 1.0).unwrap();
        r.check(plan.stages == stages && plan.regime == StageRegime::Saturated, || {
            format!("n=2 eps/L={eps}: expected saturated M={stages}, got {:?}", plan)
        });
        let scenario = Scenario::new(model.clone(), PlanSpec::Stages(plan), SIM_TRIALS, seed).unwrap();
        simulate_against(r, &format!("n=2 M={stages} eps/L={eps}"), scenario, stages as f64);
    }
}

// ---------------------------------------------------------------------------
// 8. Codebook round trip.

fn criterion_8(r: &mut Report) {
    let started = Instant::now();
    for n in 1..=16 {
        let cb = build_codebook(n).unwrap();
        for j in 1..=segment_count(n) {
            let decoded = cb.response_for(j).map(|resp| decode_segment(&cb, &resp));
            r.check(matches!(decoded, Some(Ok(d)) if d == j), || format!("n={n} j={j}: {decoded:?}"));
        }
    }
    r.within(Duration::from_secs(1), started, "round trip");
}

// ---------------------------------------------------------------------------
// 9. Lagrange planners against the generic minimizer.

const OBJECTIVE_TOL: f64 = 1e-6;

fn random_prior(rng: &mut ChaCha8Rng) -> PriorDensity {
    let cells = rng.random_range(2..=12);
    let mut cuts: Vec<f64> = (0..cells - 1).map(|_| rng.random_range(0.02..0.98)).collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup_by(|a, b| (*a - *b).abs() < 1e-3);
    let mut breakpoints = vec![0.0];
    breakpoints.extend(cuts);
    breakpoints.push(1.0);
    // Heavy-tailed heights so some cells saturate; occasional empty cells.
    let values = (1..breakpoints.len())
        .map(|_| if rng.random_bool(0.1) { 0.0 } else { rng.random_range(0.0f64..1.0).powi(4) * 50.0 + 0.01 })
        .collect();
    PriorDensity::piecewise(breakpoints, values).unwrap()
}

/// Absolute agreement within the tolerance; tracks the relative gap too.
fn agrees(worst_rel: &mut f64, planner: f64, best: f64) -> bool {
    let gap = (planner - best).abs();
    *worst_rel = worst_rel.max(gap / best.abs().max(f64::MIN_POSITIVE));
    gap <= OBJECTIVE_TOL
}

fn criterion_9(r: &mut Report) {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (mut phi_clamped, mut alpha_clamped) = (0, 0);
    let mut worst_rel: f64 = 0.0;
    for case in 0..50 {
        let prior = random_prior(&mut rng);
        let widths = prior.widths();
        let density = prior.values().to_vec();
        let eps = rng.random_range(0.05..0.9);

        let profile = periodic_load_profile(&prior, eps).unwrap();
        let planner = objective_total(&InverseLoad { density: &density }, &widths, profile.phi());
        let reference = constrained_minimizer(&InverseLoad { density: &density }, &widths, eps, &vec![1.0; widths.len()])
            .map(|x| objective_total(&InverseLoad { density: &density }, &widths, &x));
        phi_clamped += usize::from(profile.phi().iter().any(|&p| p >= 1.0));
        match reference {
            Ok(best) => r.check(agrees(&mut worst_rel, planner, best), || {
                format!("case {case} periodic eps={eps:.3}: planner {planner} vs minimizer {best}")
            }),
            Err(e) => r.check(false, || format!("case {case} periodic: minimizer failed: {e}")),
        }

        let lambda = rng.random_range(0.5..3.0);
        let t = rng.random_range(0.5..20.0);
        let load = general_onestep_alpha(&prior, eps, lambda, t).unwrap();
        let objective = ExpLoad { density: &density, lambda };
        let planner = objective_total(&objective, &widths, load.alpha());
        let reference = constrained_minimizer(&objective, &widths, eps * t, &vec![t; widths.len()])
            .map(|x| objective_total(&objective, &widths, &x));
        alpha_clamped += usize::from(load.alpha().iter().any(|&a| a >= t));
        match reference {
            Ok(best) => r.check(agrees(&mut worst_rel, planner, best), || {
                format!("case {case} cumulative eps={eps:.3} λ={lambda:.2} t={t:.2}: planner {planner} vs minimizer {best}")
            }),
            Err(e) => r.check(false, || format!("case {case} cumulative: minimizer failed: {e}")),
        }
    }
    r.note(format!("clamp active in {phi_clamped} periodic and {alpha_clamped} cumulative cases"));
    r.note(format!("largest relative objective gap {worst_rel:.2e}"));
    r.check(phi_clamped > 0 && alpha_clamped > 0, || "no clamp-activating case was generated".into());
}

// ---------------------------------------------------------------------------

type Criterion = (&'static str, fn(&mut Report));

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("optimal multi-target ladders reproduce the published table", criterion_1),
        ("in-aperture count law agrees with brute force", criterion_2),
        ("count law composes across narrowing steps", criterion_3),
        ("dichotomy and trichotomy loss constants", criterion_4),
        ("simulated uniform ladders match the closed-form mean time", criterion_5),
        ("simulated two-source ladder matches the published mean time", criterion_6),
        ("multi-receiver plans, boundaries and flat regimes", criterion_7),
        ("codebook round trip for up to 16 receivers", criterion_8),
        ("Lagrange planners match the generic minimizer", criterion_9),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (title, run)) in criteria.iter().enumerate() {
        let id = format!("criterion_{}", i + 1);
        if !filter.is_empty() && !filter.iter().any(|f| id.contains(f.as_str())) {
            continue;
        }
        let mut report = Report::default();
        run(&mut report);
        let verdict = if report.misses.is_empty() { "PASS" } else { "FAIL" };
        println!("{verdict} {id}: {title}");
        for note in &report.notes {
            println!("     {note}");
        }
        for miss in &report.misses {
            println!("     miss: {miss}");
        }
        failed += usize::from(!report.misses.is_empty());
    }
    println!("acceptance: {} failed", failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
