//! Monte Carlo sampling of the two-state semi-Markov process.
//!
//! Samples are split into fixed-size chunks. Chunk `k` draws from its own
//! ChaCha8 stream (seeded from the user seed, stream number derived from
//! `k`), and per-chunk tallies are merged in chunk order, so results depend
//! only on `(seed, n)` and never on how chunks are scheduled. The
//! [`ChunkExecutor`] trait lets a caller run chunks in parallel.

mod estimators;
mod sampling;

pub use estimators::{
    chapman_kolmogorov_residual, estimate_conditional, estimate_jump_counts, estimate_occupation,
    estimate_parity, propagator_ck_residual, CkResidual, ConditionalEstimate, MIN_CONDITIONING_EVENTS,
    MIN_PARITY_SAMPLES,
};
pub use sampling::{sample_trajectory, sample_trajectory_from, TrajectorySample};

use alloc::vec::Vec;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::math;

/// Samples per chunk.
pub const CHUNK_SIZE: u64 = 8192;

/// Random stream used by the sampler.
#[derive(Debug, Clone)]
pub struct RngStream {
    inner: ChaCha8Rng,
}

impl RngStream {
    /// Stream `stream` of the generator keyed by `seed`.
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(stream);
        RngStream { inner }
    }

    /// Uniform on `[0, 1)` with 53 random bits.
    pub fn uniform(&mut self) -> f64 {
        (self.inner.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Exponential variate with the given rate, by inversion.
    pub fn exponential(&mut self, rate: f64) -> f64 {
        -math::ln(1.0 - self.uniform()) / rate
    }

    pub fn bernoulli(&mut self, p: f64) -> bool {
        if p >= 1.0 {
            true
        } else if p <= 0.0 {
            false
        } else {
            self.uniform() < p
        }
    }
}

/// Runs a closure once per chunk index and returns the results in chunk order.
pub trait ChunkExecutor {
    fn map_chunks<T, F>(&self, chunks: u64, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(u64) -> T + Sync + Send;
}

/// Runs chunks one after another on the calling thread.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl ChunkExecutor for Sequential {
    fn map_chunks<T, F>(&self, chunks: u64, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(u64) -> T + Sync + Send,
    {
        (0..chunks).map(f).collect()
    }
}

/// Number of chunks covering `n` samples.
pub fn chunk_count(n: u64) -> u64 {
    n.div_ceil(CHUNK_SIZE)
}

/// Number of samples in chunk `k` out of `n`.
pub fn chunk_len(n: u64, k: u64) -> u64 {
    CHUNK_SIZE.min(n - k * CHUNK_SIZE)
}

/// Stream number for chunk `k` of an independent sample family.
pub(crate) fn stream_id(family: u64, k: u64) -> u64 {
    (family << 40) | k
}

/// A Monte Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimateWithError {
    pub value: f64,
    pub std_error: f64,
    pub samples: u64,
}

impl EstimateWithError {
    /// Mean and `std/√n` from running sums.
    pub(crate) fn from_sums(n: u64, sum: f64, sum_sq: f64) -> Self {
        let nf = n as f64;
        let mean = sum / nf;
        let var = if n > 1 {
            ((sum_sq - nf * mean * mean) / (nf - 1.0)).max(0.0)
        } else {
            0.0
        };
        EstimateWithError {
            value: mean,
            std_error: math::sqrt(var / nf),
            samples: n,
        }
    }

    /// Proportion `hits / n` with the binomial standard error.
    pub(crate) fn proportion(hits: u64, n: u64) -> Self {
        let h = hits as f64;
        Self::from_sums(n, h, h)
    }

    /// Two-sample z statistic `(a - b) / √(se_a² + se_b²)`.
    pub fn z_score(&self, other: &EstimateWithError) -> f64 {
        let se = math::hypot(self.std_error, other.std_error);
        let diff = self.value - other.value;
        if se == 0.0 {
            if diff == 0.0 { 0.0 } else { diff.signum() * f64::INFINITY }
        } else {
            diff / se
        }
    }

    /// `|value - reference| <= k · std_error`
    pub fn within(&self, reference: f64, k: f64) -> bool {
        (self.value - reference).abs() <= k * self.std_error
    }
}
