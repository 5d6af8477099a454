//! Reproducible Monte Carlo plumbing.
//!
//! Sample `i` of a run with seed `s` always draws from ChaCha8 stream `i`
//! keyed by `s`, so an estimate depends only on `(seed, n_samples)` and never
//! on how many worker threads evaluated it. Per-sample values are collected
//! in index order and reduced with pairwise summation.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

/// Seed used when none is supplied on the command line.
pub const DEFAULT_SEED: u64 = 0xD1CE;

/// Monte Carlo mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MCEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub n_samples: usize,
    pub seed: u64,
}

impl MCEstimate {
    /// Distance from `target` in units of the standard error.
    ///
    /// A zero-variance estimate is infinitely far from anything it does not
    /// hit exactly.
    pub fn sigma_distance(&self, target: f64) -> f64 {
        let diff = (self.mean - target).abs();
        if diff == 0.0 {
            0.0
        } else {
            diff / self.std_error
        }
    }

    pub fn within_sigma(&self, target: f64, k: f64) -> bool {
        self.sigma_distance(target) <= k
    }

    /// Difference of two independent estimates in joint standard errors.
    pub fn joint_sigma_distance(&self, other: &MCEstimate) -> f64 {
        let diff = (self.mean - other.mean).abs();
        if diff == 0.0 {
            0.0
        } else {
            diff / self.std_error.hypot(other.std_error)
        }
    }
}

/// The random stream owned by sample `index` of a run keyed by `seed`.
pub fn sample_stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub(crate) fn pairwise_sum(values: &[f64]) -> f64 {
    const BLOCK: usize = 64;
    if values.len() <= BLOCK {
        return values.iter().sum();
    }
    let (left, right) = values.split_at(values.len() / 2);
    pairwise_sum(left) + pairwise_sum(right)
}

/// Mean and standard error of `f` over `n_samples` independent streams.
pub fn mc_mean<F>(n_samples: usize, seed: u64, f: F) -> Result<MCEstimate>
where
    F: Fn(&mut ChaCha8Rng) -> f64 + Sync,
{
    if n_samples < 2 {
        return Err(Error::Domain(format!(
            "a Monte Carlo estimate needs at least 2 samples, got {n_samples}"
        )));
    }
    let base = ChaCha8Rng::seed_from_u64(seed);
    let values: Vec<f64> = (0..n_samples as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = base.clone();
            rng.set_stream(i);
            f(&mut rng)
        })
        .collect();
    let n = n_samples as f64;
    let mean = pairwise_sum(&values) / n;
    let squared: Vec<f64> = values.iter().map(|x| (x - mean) * (x - mean)).collect();
    let variance = pairwise_sum(&squared) / (n - 1.0);
    Ok(MCEstimate {
        mean,
        std_error: (variance / n).sqrt(),
        n_samples,
        seed,
    })
}

/// True when every pair of estimates agrees within `k` joint standard errors.
pub fn mutually_consistent(estimates: &[MCEstimate], k: f64) -> bool {
    estimates.iter().enumerate().all(|(i, a)| {
        estimates[i + 1..]
            .iter()
            .all(|b| a.joint_sigma_distance(b) <= k)
    })
}
