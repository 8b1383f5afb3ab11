//! Deterministic random source and the samplers used by every statistic.
//!
//! Reproducibility contract: a [`RandomSource`] is fully determined by its
//! 64-bit seed and 64-bit stream id, so identical (seed, stream) pairs yield
//! bit-identical variate sequences on every platform. Parallel code never
//! shares a source; it derives one independent sub-stream per task with
//! [`RandomSource::substream`].

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::special::normal_quantile;
use crate::types::{CountVector, ProbabilityVector, RankingMatrix, UnitWeights};

/// Seeded, stream-indexed random source (ChaCha8 keyed by the seed, with the
/// stream id as the cipher nonce).
///
/// Standard normals are produced by applying the normal inverse CDF to one
/// uniform draw each, so the mapping from the raw ChaCha stream to variates
/// is fixed: no rejection step ever consumes a data-dependent number of
/// draws.
#[derive(Debug, Clone)]
pub struct RandomSource {
    seed: u64,
    stream: u64,
    rng: ChaCha8Rng,
}

impl RandomSource {
    /// Source on stream 0 of `seed`.
    pub fn new(seed: u64) -> Self {
        Self::with_stream(seed, 0)
    }

    /// Source on an explicit stream of `seed`. Distinct stream ids give
    /// independent variate sequences.
    pub fn with_stream(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self { seed, stream, rng }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// Derive the `index`-th child stream of this source.
    ///
    /// The child keeps the seed and uses stream id
    /// `splitmix64(parent_stream + (index + 1) * GOLDEN)`, i.e. the SplitMix64
    /// output sequence started at the parent stream id. Derivation depends
    /// only on (seed, parent stream, index), never on how many variates the
    /// parent has produced, so replicate i of a parallel experiment sees the
    /// same stream no matter the thread count.
    pub fn substream(&self, index: u64) -> RandomSource {
        Self::with_stream(self.seed, derive_stream(self.stream, index))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform on the open interval (0, 1), at the midpoints of the
    /// 2^53-bin lattice so the endpoints are never produced.
    pub fn uniform(&mut self) -> f64 {
        ((self.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal variate via the inverse CDF; one uniform per call.
    pub fn standard_normal(&mut self) -> f64 {
        normal_quantile(self.uniform())
    }

    /// Uniform integer in 0..k (k >= 1).
    pub(crate) fn below(&mut self, k: usize) -> usize {
        debug_assert!(k >= 1);
        let v = (self.uniform() * k as f64) as usize;
        v.min(k - 1)
    }
}

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

fn derive_stream(parent: u64, index: u64) -> u64 {
    // SplitMix64 step
    let z = parent.wrapping_add(index.wrapping_add(1).wrapping_mul(GOLDEN));
    let z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    let z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Draw theta uniformly from the unit sphere S^{n-1}: an n-vector of
/// independent standard normals, normalized to unit length.
///
/// The (numerically possible, probability-zero) event of a norm below 1e-300
/// is handled by resampling.
pub fn sample_sphere(n: usize, rng: &mut RandomSource) -> Result<UnitWeights> {
    if n == 0 {
        return Err(Error::InvalidDimension(
            "sphere dimension n must be at least 1".into(),
        ));
    }
    loop {
        let mut gauss: Vec<f64> = Vec::with_capacity(n);
        gauss.extend((0..n).map(|_| rng.standard_normal()));
        let norm = gauss.iter().map(|g| g * g).sum::<f64>().sqrt();
        if norm >= 1e-300 {
            gauss.iter_mut().for_each(|g| *g /= norm);
            return UnitWeights::new(gauss);
        }
    }
}

/// One draw from the categorical distribution on {1, ..., r} given by `p`.
pub fn sample_categorical(p: &ProbabilityVector, rng: &mut RandomSource) -> usize {
    let u = rng.uniform();
    let mut acc = 0.0;
    for (j, &pj) in p.entries().iter().enumerate() {
        acc += pj;
        if u < acc {
            return j + 1;
        }
    }
    // the running sum can fall a few ulps short of 1
    p.len()
}

/// Multinomial counts from n independent categorical draws.
pub fn sample_multinomial(
    p: &ProbabilityVector,
    n: u64,
    rng: &mut RandomSource,
) -> Result<CountVector> {
    if n == 0 {
        return Err(Error::InvalidDimension("n must be at least 1".into()));
    }
    let mut counts = vec![0u64; p.len()];
    for _ in 0..n {
        counts[sample_categorical(p, rng) - 1] += 1;
    }
    CountVector::new(counts, n)
}

/// n independent uniform random permutations of {1, ..., r} (Fisher-Yates).
pub fn sample_rankings(n: usize, r: usize, rng: &mut RandomSource) -> Result<RankingMatrix> {
    if n == 0 {
        return Err(Error::InvalidDimension("n must be at least 1".into()));
    }
    if r < 2 {
        return Err(Error::InvalidDimension(format!(
            "need at least 2 items per ranking, got {r}"
        )));
    }
    let mut ranks = Vec::with_capacity(n * r);
    let mut scratch: Vec<u32> = (1..=r as u32).collect();
    for _ in 0..n {
        for (k, v) in scratch.iter_mut().enumerate() {
            *v = k as u32 + 1;
        }
        for i in (1..r).rev() {
            let j = rng.below(i + 1);
            scratch.swap(i, j);
        }
        ranks.extend_from_slice(&scratch);
    }
    Ok(RankingMatrix::from_flat_unchecked(ranks, n, r))
}
