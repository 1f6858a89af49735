//! Search regions that may wrap around the ends of the interval.
//!
//! A window swept cyclically over a segment can straddle the segment's end,
//! in which case the next segment is two (or more) disjoint pieces of the
//! original interval. A [`Region`] keeps those pieces in sweep order and
//! exposes a single virtual coordinate `[0, width)` over them.

use serde::{Deserialize, Serialize};

/// A piece `[start, start + width)` of the original interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Arc {
    pub start: f64,
    pub width: f64,
}

impl Arc {
    pub fn end(&self) -> f64 {
        self.start + self.width
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Region {
    arcs: Vec<Arc>,
    width: f64,
}

impl Region {
    pub fn interval(start: f64, width: f64) -> Self {
        Self { arcs: vec![Arc { start, width }], width }
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn into_arcs(self) -> Vec<Arc> {
        self.arcs
    }

    /// Original-interval coordinate of virtual coordinate `v`.
    pub fn locate(&self, v: f64) -> f64 {
        let mut rest = v;
        for arc in &self.arcs {
            if rest < arc.width {
                return arc.start + rest;
            }
            rest -= arc.width;
        }
        let last = self.arcs[self.arcs.len() - 1];
        last.end()
    }

    /// Whether original coordinate `x` lies in the region, allowing a few
    /// ulps of rounding at the arc ends.
    pub fn contains(&self, x: f64) -> bool {
        self.arcs.iter().any(|a| {
            let slack = 8.0 * f64::EPSILON * a.end().abs().max(1.0);
            x >= a.start - slack && x <= a.end() + slack
        })
    }

    /// The part of the region under a window covering virtual coordinates
    /// `[offset, offset + width)` taken modulo the region width.
    pub fn slice(&self, offset: f64, width: f64) -> Region {
        let total = self.width;
        let width = width.min(total);
        let mut arcs = Vec::new();
        if offset + width <= total {
            self.collect(offset, offset + width, &mut arcs);
        } else {
            self.collect(offset, total, &mut arcs);
            self.collect(0.0, offset + width - total, &mut arcs);
        }
        Region { arcs: merge(arcs), width }
    }

    fn collect(&self, from: f64, to: f64, out: &mut Vec<Arc>) {
        let mut base = 0.0;
        for arc in &self.arcs {
            let lo = from.max(base);
            let hi = to.min(base + arc.width);
            if hi > lo {
                out.push(Arc { start: arc.start + (lo - base), width: hi - lo });
            }
            base += arc.width;
        }
    }
}

fn merge(arcs: Vec<Arc>) -> Vec<Arc> {
    let mut out: Vec<Arc> = Vec::with_capacity(arcs.len());
    for arc in arcs {
        match out.last_mut() {
            Some(prev) if (prev.end() - arc.start).abs() <= 4.0 * f64::EPSILON * prev.end().abs().max(1.0) => {
                prev.width = arc.end() - prev.start;
            }
            _ => out.push(arc),
        }
    }
    out
}
