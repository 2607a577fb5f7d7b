//! Binomial intervals, goodness-of-fit helpers and trial-parallel execution.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF, Normal};

use crate::error::{Error, Result};

/// Confidence level of every interval the experiments report.
pub const CONFIDENCE: f64 = 0.99;

/// Two-sided Wilson score interval for a binomial proportion.
pub fn wilson_interval(successes: u64, trials: u64, confidence: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let z = Normal::new(0.0, 1.0).unwrap().inverse_cdf(0.5 + confidence / 2.0);
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// A Monte Carlo frequency with its 99% interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub successes: u64,
    pub trials: u64,
    pub frequency: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
}

impl Estimate {
    pub fn new(successes: u64, trials: u64) -> Self {
        let (ci_lo, ci_hi) = wilson_interval(successes, trials, CONFIDENCE);
        let frequency = if trials == 0 { 0.0 } else { successes as f64 / trials as f64 };
        Estimate { successes, trials, frequency, ci_lo, ci_hi }
    }

    /// Binomial standard error of the frequency.
    pub fn sigma(&self) -> f64 {
        if self.trials == 0 {
            return 0.0;
        }
        (self.frequency * (1.0 - self.frequency) / self.trials as f64).sqrt()
    }
}

/// Pearson's statistic of `observed` against `expected` probabilities.
pub fn chi_square_statistic(observed: &[u64], expected: &[f64]) -> f64 {
    let total: u64 = observed.iter().sum();
    observed
        .iter()
        .zip(expected)
        .map(|(&o, &p)| {
            let e = p * total as f64;
            (o as f64 - e).powi(2) / e
        })
        .sum()
}

/// Upper-tail p-value of a chi-square statistic.
pub fn chi_square_p_value(statistic: f64, degrees_of_freedom: usize) -> f64 {
    let dist = ChiSquared::new(degrees_of_freedom as f64).expect("positive degrees of freedom");
    1.0 - dist.cdf(statistic)
}

/// Total variation distance between two probability vectors.
pub fn total_variation(p: &[f64], q: &[f64]) -> f64 {
    0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>()
}

/// Normalizes counts to probabilities.
pub fn frequencies(counts: &[u64]) -> Vec<f64> {
    let total: u64 = counts.iter().sum();
    counts.iter().map(|&c| if total == 0 { 0.0 } else { c as f64 / total as f64 }).collect()
}

/// Per-worker accumulator merged after the trials finish. Merging must be
/// associative and commutative so results do not depend on scheduling.
pub trait Tally: Send + Sized {
    fn merge(&mut self, other: Self);
}

impl Tally for Vec<u64> {
    fn merge(&mut self, other: Self) {
        if self.len() < other.len() {
            self.resize(other.len(), 0);
        }
        for (a, b) in self.iter_mut().zip(other) {
            *a += b;
        }
    }
}

impl Tally for u64 {
    fn merge(&mut self, other: Self) {
        *self += other;
    }
}

const CHUNK: u64 = 1024;

/// Runs trials `0..trials` on `workers` threads. Each chunk of trials gets a
/// fresh worker state from `init` and a fresh tally from `empty`; trial `t`
/// should draw from the stream keyed by `t`.
pub fn run_trials<W, S>(
    trials: u64,
    workers: usize,
    init: impl Fn() -> W + Sync,
    empty: impl Fn() -> S + Sync,
    trial: impl Fn(&mut W, u64, &mut S) -> Result<()> + Sync,
) -> Result<S>
where
    S: Tally,
{
    if workers == 0 {
        return Err(Error::InvalidParameter("workers must be at least 1".into()));
    }
    let chunks = trials.div_ceil(CHUNK);
    let run_chunk = |c: u64| -> Result<S> {
        let mut w = init();
        let mut s = empty();
        for t in c * CHUNK..((c + 1) * CHUNK).min(trials) {
            trial(&mut w, t, &mut s)?;
        }
        Ok(s)
    };
    if workers == 1 {
        let mut total = empty();
        for c in 0..chunks {
            total.merge(run_chunk(c)?);
        }
        return Ok(total);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidParameter(e.to_string()))?;
    pool.install(|| {
        (0..chunks).into_par_iter().map(run_chunk).try_reduce(&empty, |mut a, b| {
            a.merge(b);
            Ok(a)
        })
    })
}
