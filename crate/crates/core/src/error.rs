use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("invalid probability vector: {0}")]
    InvalidProbabilities(String),

    #[error("invalid counts: {0}")]
    InvalidCounts(String),

    /// `row` is 1-based within the ranking matrix.
    #[error("row {row}: not a permutation")]
    NotAPermutation { row: usize },

    #[error("invalid unit weights: {0}")]
    InvalidWeights(String),

    #[error("degenerate score: all score values are equal")]
    DegenerateScore,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// The phi function was evaluated outside its domain. `cell` is the
    /// 1-based category index of the offending term. This typically means the
    /// sample size is too small relative to min(p); consult the sample-size
    /// report before retrying.
    #[error(
        "phi domain violation at cell {cell}: argument {argument} is outside the domain of phi; \
         n is likely too small relative to min(p) (see the sample-size report)"
    )]
    PhiDomain { cell: usize, argument: f64 },

    #[error("invalid phi spec: {0}")]
    InvalidPhi(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid experiment config: {0}")]
    InvalidConfig(String),

    #[error(
        "excluded {excluded} of {replicates} replicates at n={n}: \
         domain-violation rate exceeds 5%"
    )]
    ExcessiveExclusions {
        n: usize,
        excluded: usize,
        replicates: usize,
    },

    #[error("empty sample")]
    EmptySample,
}

pub type Result<T> = std::result::Result<T, Error>;
