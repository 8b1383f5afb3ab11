//! Validated domain types shared by every statistic.

use crate::error::{Error, Result};

/// Tolerance for the "sums to one" and "unit norm" invariants.
const NORMALIZATION_TOL: f64 = 1e-12;

/// A null-hypothesis probability vector p = (p_1, ..., p_r).
///
/// Every entry is strictly positive and the entries sum to one within 1e-12.
/// At least two categories are required.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityVector {
    entries: Vec<f64>,
}

impl ProbabilityVector {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if entries.len() < 2 {
            return Err(Error::InvalidDimension(format!(
                "need at least 2 categories, got {}",
                entries.len()
            )));
        }
        for (j, &p) in entries.iter().enumerate() {
            if !p.is_finite() || p <= 0.0 {
                return Err(Error::InvalidProbabilities(format!(
                    "entry {} is {p}; all entries must be finite and strictly positive",
                    j + 1
                )));
            }
        }
        let sum: f64 = entries.iter().sum();
        if (sum - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::InvalidProbabilities(format!(
                "entries sum to {sum}, expected 1 within {NORMALIZATION_TOL:e}"
            )));
        }
        Ok(Self { entries })
    }

    /// The uniform vector (1/r, ..., 1/r).
    pub fn uniform(r: usize) -> Result<Self> {
        Self::new(vec![1.0 / r as f64; r])
    }

    /// Number of categories r.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    /// min(p_1, ..., p_r); strictly positive by construction.
    pub fn min_entry(&self) -> f64 {
        self.entries.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Observed multinomial counts Y = (Y_1, ..., Y_r) with a known total n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountVector {
    counts: Vec<u64>,
    n: u64,
}

impl CountVector {
    /// The counts must sum exactly to `n` and `n` must be positive.
    pub fn new(counts: Vec<u64>, n: u64) -> Result<Self> {
        if counts.len() < 2 {
            return Err(Error::InvalidDimension(format!(
                "need at least 2 categories, got {}",
                counts.len()
            )));
        }
        if n == 0 {
            return Err(Error::InvalidCounts("n must be positive".into()));
        }
        let sum: u64 = counts.iter().sum();
        if sum != n {
            return Err(Error::InvalidCounts(format!(
                "counts sum to {sum}, expected n = {n}"
            )));
        }
        Ok(Self { counts, n })
    }

    /// Takes n as the sum of the counts.
    pub fn from_counts(counts: Vec<u64>) -> Result<Self> {
        let n = counts.iter().sum();
        Self::new(counts, n)
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// Number of categories r.
    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// n observed rankings, each row a permutation of {1, ..., r}.
///
/// Ties are rejected at construction: midranks would change the score
/// variance and with it the limiting distribution, so raw scores must be
/// converted to proper permutations (or rejected) before they get here.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankingMatrix {
    // row-major n*r storage
    ranks: Vec<u32>,
    n: usize,
    r: usize,
}

impl RankingMatrix {
    pub fn new(rows: Vec<Vec<u32>>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::InvalidDimension("need at least 1 ranking".into()));
        }
        let r = rows[0].len();
        if r < 2 {
            return Err(Error::InvalidDimension(format!(
                "need at least 2 items per ranking, got {r}"
            )));
        }
        let mut ranks = Vec::with_capacity(rows.len() * r);
        let mut seen = vec![false; r];
        for (i, row) in rows.iter().enumerate() {
            if row.len() != r {
                return Err(Error::DimensionMismatch {
                    expected: r,
                    got: row.len(),
                });
            }
            seen.iter_mut().for_each(|s| *s = false);
            for &rank in row {
                if rank < 1 || rank as usize > r || seen[rank as usize - 1] {
                    return Err(Error::NotAPermutation { row: i + 1 });
                }
                seen[rank as usize - 1] = true;
            }
            ranks.extend_from_slice(row);
        }
        Ok(Self {
            ranks,
            n: rows.len(),
            r,
        })
    }

    /// Caller guarantees each row is a permutation of 1..=r.
    pub(crate) fn from_flat_unchecked(ranks: Vec<u32>, n: usize, r: usize) -> Self {
        debug_assert_eq!(ranks.len(), n * r);
        Self { ranks, n, r }
    }

    /// Number of rankings n.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of ranked items r.
    pub fn r(&self) -> usize {
        self.r
    }

    /// The i-th ranking (0-based row index).
    pub fn row(&self, i: usize) -> &[u32] {
        &self.ranks[i * self.r..(i + 1) * self.r]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u32]> {
        self.ranks.chunks_exact(self.r)
    }
}

/// External randomization weights theta with unit Euclidean norm.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitWeights {
    weights: Vec<f64>,
}

impl UnitWeights {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidDimension(
                "need at least 1 weight".into(),
            ));
        }
        let norm = weights.iter().map(|w| w * w).sum::<f64>().sqrt();
        if !norm.is_finite() || (norm - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::InvalidWeights(format!(
                "Euclidean norm is {norm}, expected 1 within {NORMALIZATION_TOL:e}"
            )));
        }
        Ok(Self { weights })
    }

    /// The equal-weights vector (1/sqrt(n), ..., 1/sqrt(n)), which reduces
    /// every randomized statistic to its classical counterpart.
    pub fn equal(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDimension("need at least 1 weight".into()));
        }
        Self::new(vec![1.0 / (n as f64).sqrt(); n])
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}
