//! Randomized strong-diameter partitions of arbitrary graphs with
//! exponential shifts on every vertex.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp};

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::mpx::{center_distances, mpx_cluster_with, ShiftAssignment};
use crate::partition::Partition;

/// Number of whole-vector resampling attempts before giving up.
pub const GENERAL_RESAMPLE_LIMIT: usize = 100;

/// Draws from the exponential distribution with mean `lambda`.
pub struct ExponentialSampler {
    lambda: f64,
    rng: ChaCha8Rng,
}

impl ExponentialSampler {
    pub fn new(lambda: f64, seed: u64) -> Result<Self> {
        if !(lambda >= 0.0) || lambda.is_infinite() {
            return Err(Error::InvalidParameter(format!("mean {lambda} must be finite and non-negative")));
        }
        Ok(ExponentialSampler { lambda, rng: ChaCha8Rng::seed_from_u64(seed) })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn sample(&mut self) -> f64 {
        if self.lambda == 0.0 {
            return 0.0;
        }
        let e = Exp::new(1.0 / self.lambda).expect("positive rate");
        e.sample(&mut self.rng)
    }
}

/// Exponential draws with mean `lambda`, truncated at `lambda_top`.
pub struct BetailedSampler {
    inner: ExponentialSampler,
    lambda_top: f64,
}

impl BetailedSampler {
    pub fn new(lambda: f64, lambda_top: f64, seed: u64) -> Result<Self> {
        if !(lambda_top >= 0.0) {
            return Err(Error::InvalidParameter(format!("cap {lambda_top} must be non-negative")));
        }
        Ok(BetailedSampler { inner: ExponentialSampler::new(lambda, seed)?, lambda_top })
    }

    /// Returns `(raw draw, truncated value)`.
    pub fn sample_raw(&mut self) -> (f64, f64) {
        let raw = self.inner.sample();
        (raw, raw.min(self.lambda_top))
    }

    pub fn sample(&mut self) -> f64 {
        self.sample_raw().1
    }
}

/// Result of [`general_strong_partition`].
#[derive(Debug, Clone)]
pub struct GeneralOutcome {
    pub partition: Partition,
    /// The shifts actually used, one per vertex.
    pub shifts: ShiftAssignment,
    /// Number of shift vectors drawn.
    pub attempts: usize,
}

/// Mean of the exponential shifts for `n` vertices and target diameter `Δ`.
pub fn general_lambda(n: usize, delta: f64) -> f64 {
    delta / (4.0 * (n as f64).ln())
}

/// Padding parameter, ball radius and cluster-count bound used to assess
/// the general scheme: `α = log2 n`, radius `Δ/(8α)`, bound
/// `6 n^(1/α) ln n`.
pub fn general_padding_gate(n: usize, delta: f64) -> (f64, f64, f64) {
    let nf = n as f64;
    let alpha = nf.log2().max(1.0);
    (alpha, delta / (8.0 * alpha), 6.0 * nf.powf(1.0 / alpha) * nf.ln())
}

/// Strong-diameter partition of a connected graph with clusters of diameter
/// at most `Δ`. Every vertex gets an exponential shift; the whole vector is
/// redrawn until the largest shift is at most `Δ/2`.
pub fn general_strong_partition(g: &WeightedGraph, delta: f64, seed: u64) -> Result<GeneralOutcome> {
    g.require_connected()?;
    let n = g.n();
    if n == 0 {
        return Err(Error::EmptySet);
    }
    let centers: Vec<usize> = (0..n).collect();
    if n == 1 {
        let shifts = ShiftAssignment::new(centers, vec![0.0])?;
        return Ok(GeneralOutcome { partition: Partition::singletons(1, delta), shifts, attempts: 0 });
    }
    let mut sampler = ExponentialSampler::new(general_lambda(n, delta), seed)?;
    let dist = center_distances(g, &centers);
    for attempt in 1..=GENERAL_RESAMPLE_LIMIT {
        let draws: Vec<f64> = (0..n).map(|_| sampler.sample()).collect();
        if draws.iter().all(|&s| s <= delta / 2.0) {
            let shifts = ShiftAssignment::new(centers, draws)?;
            let partition = mpx_cluster_with(&shifts, &dist, delta)?;
            return Ok(GeneralOutcome { partition, shifts, attempts: attempt });
        }
    }
    Err(Error::ResampleLimitExceeded(GENERAL_RESAMPLE_LIMIT))
}
