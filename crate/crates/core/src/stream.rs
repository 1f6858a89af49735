//! Deterministic random streams and chunked parallel reduction.
//!
//! Every trial `i` of a run with seed `s` draws from ChaCha8 keyed by
//! `seed_from_u64(s)` on stream `i`. Trials are grouped into fixed chunks;
//! chunks run in parallel, each folds its trials in index order, and chunk
//! results are merged in chunk order, so a run is bit-identical for any
//! thread count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::Result;

/// Identifier recorded with every estimate.
pub const RNG_ALGORITHM: &str = "chacha8/seed_from_u64/stream=trial_index";

const CHUNK: u64 = 2048;

/// Per-trial generator factory for one seed.
#[derive(Clone)]
pub struct TrialStreams {
    base: ChaCha8Rng,
}

impl TrialStreams {
    pub fn new(seed: u64) -> Self {
        Self { base: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn trial(&self, index: u64) -> ChaCha8Rng {
        let mut rng = self.base.clone();
        rng.set_stream(index);
        rng.set_word_pos(0);
        rng
    }
}

/// Folds `count` trials into chunk accumulators in parallel and merges them
/// in order.
pub(crate) fn fold_trials<A, I, F, M>(count: u64, init: I, fold: F, merge: M) -> Result<A>
where
    A: Send,
    I: Fn() -> A + Sync,
    F: Fn(&mut A, u64) -> Result<()> + Sync,
    M: Fn(A, A) -> A,
{
    let chunks = count.div_ceil(CHUNK);
    let parts: Vec<A> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut acc = init();
            for i in c * CHUNK..((c + 1) * CHUNK).min(count) {
                fold(&mut acc, i)?;
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;
    Ok(parts.into_iter().fold(init(), merge))
}

/// Running mean and sum of squared deviations (Welford / Chan merge).
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Moments {
    pub count: u64,
    pub mean: f64,
    m2: f64,
}

impl Moments {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub fn merge(self, other: Moments) -> Moments {
        if self.count == 0 {
            return other;
        }
        if other.count == 0 {
            return self;
        }
        let count = self.count + other.count;
        let delta = other.mean - self.mean;
        let mean = self.mean + delta * other.count as f64 / count as f64;
        let m2 = self.m2
            + other.m2
            + delta * delta * self.count as f64 * other.count as f64 / count as f64;
        Moments { count, mean, m2 }
    }

    /// Sample standard deviation (`n − 1` denominator); zero for one sample.
    pub fn sd(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            (self.m2 / (self.count - 1) as f64).sqrt()
        }
    }

    pub fn stderr(&self) -> f64 {
        if self.count == 0 {
            0.0
        } else {
            self.sd() / (self.count as f64).sqrt()
        }
    }
}
