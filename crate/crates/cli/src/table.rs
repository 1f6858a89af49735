//! `table`: CSV tables of optimal plans over accuracy grids.

use clap::{Args, ValueEnum};
use pulse_seek::{optimize_ladder, plan_multistage};

use crate::format::{emit, number};
use crate::{usage, Outcome};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Which {
    /// Optimal aperture ladders for the first of n sources.
    Table1,
    /// Stage plans for n >= 2 receivers.
    Table4,
    /// Stage plans for a single receiver.
    Table5,
}

#[derive(Args, Debug)]
pub struct TableArgs {
    #[arg(long, value_enum)]
    which: Which,
    /// Accuracy grid ε/L (comma separated).
    #[arg(long, value_delimiter = ',')]
    eps: Vec<f64>,
    /// Source or receiver counts (comma separated).
    #[arg(long, value_delimiter = ',')]
    n: Vec<usize>,
}

const TABLE1_EPS: [f64; 4] = [1e-1, 1e-2, 1e-3, 1e-4];
const TABLE1_N: [usize; 6] = [2, 3, 5, 10, 30, 50];
const TABLE1_MIN_RUNGS: usize = 9;
const STAGE_EPS: [f64; 10] = [0.5, 0.25, 0.15, 0.1, 0.05, 0.02, 0.01, 1e-3, 1e-4, 1e-6];
const TABLE4_N: [usize; 3] = [2, 3, 4];

fn or_default<T: Copy>(given: &[T], default: &[T]) -> Vec<T> {
    if given.is_empty() {
        default.to_vec()
    } else {
        given.to_vec()
    }
}

fn header(lead: &str, column: &str, count: usize) -> String {
    let cols: Vec<String> = (1..=count).map(|i| format!("{column}{i}")).collect();
    format!("{lead},{},lambda_tau", cols.join(","))
}

fn row(eps: f64, n: usize, steps: usize, widths: &[f64], columns: usize, tau: f64) -> String {
    let mut cells = vec![number(eps), n.to_string(), steps.to_string()];
    cells.extend((0..columns).map(|i| widths.get(i).map_or(String::new(), |w| number(*w))));
    cells.push(number(tau));
    cells.join(",")
}

pub fn run(args: TableArgs) -> Outcome {
    let eps = match args.which {
        Which::Table1 => or_default(&args.eps, &TABLE1_EPS),
        _ => or_default(&args.eps, &STAGE_EPS),
    };
    if let Some(bad) = eps.iter().find(|e| !(**e > 0.0 && **e < 1.0)) {
        return Err(usage("--eps", format!("EpsilonOutOfRange: {bad} must lie strictly inside (0, 1)")));
    }
    if let Some(bad) = args.n.iter().find(|n| **n == 0) {
        return Err(usage("--n", format!("must be at least 1, got {bad}")));
    }
    let rows = match args.which {
        Which::Table1 => {
            if eps.contains(&1e-4) {
                eprintln!("note: the fourth accuracy block of the published table is unlabeled; ε/L = 1e-4 is inferred");
            }
            let mut out = Vec::new();
            for &e in &eps {
                for &n in &or_default(&args.n, &TABLE1_N) {
                    let sol = optimize_ladder(n, e)?;
                    out.push((e, n, sol.m, sol.ladder.widths()[1..].to_vec(), sol.mean_time));
                }
            }
            out
        }
        Which::Table4 | Which::Table5 => {
            let ns = if args.which == Which::Table5 {
                if args.n.iter().any(|n| *n != 1) {
                    return Err(usage("--n", "table5 covers a single receiver (n = 1)"));
                }
                vec![1]
            } else {
                if let Some(bad) = args.n.iter().find(|n| **n < 2) {
                    return Err(usage("--n", format!("table4 needs at least 2 receivers, got {bad}")));
                }
                or_default(&args.n, &TABLE4_N)
            };
            let mut out = Vec::new();
            for &n in &ns {
                for &e in &eps {
                    let plan = plan_multistage(n, 1.0, e, 1.0)?;
                    out.push((e, n, plan.stages, plan.windows, plan.mean_time));
                }
            }
            out
        }
    };
    let longest = rows.iter().map(|r| r.3.len()).max().unwrap_or(0);
    let (columns, lead, column) = match args.which {
        Which::Table1 => (longest.max(TABLE1_MIN_RUNGS), "eps_over_L,n,m", "l"),
        _ => (longest.max(1), "eps_over_L,n,M", "W"),
    };
    let mut text = header(lead, column, columns);
    text.push('\n');
    for (e, n, steps, widths, tau) in rows {
        text.push_str(&row(e, n, steps, &widths, columns, tau));
        text.push('\n');
    }
    emit(&text)
}
