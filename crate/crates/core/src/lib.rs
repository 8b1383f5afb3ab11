//! Rank-based and goodness-of-fit test statistics with optional external
//! randomization, the chi-square numerics behind their p-values, and a Monte
//! Carlo harness that measures how fast each statistic's null distribution
//! approaches chi-square(r-1).
//!
//! The randomized variants replace the equal weights 1/sqrt(n) in the
//! normalized sum by a uniformly random unit vector theta, which makes the
//! conditional null distribution track the chi-square limit much more
//! closely at moderate n. All randomness flows through the seeded,
//! stream-splittable [`random::RandomSource`], so every computation in the
//! crate is reproducible bit for bit.

pub mod chi2;
pub mod error;
pub mod gof;
pub mod montecarlo;
pub mod random;
pub mod rank;
mod special;
pub mod types;

pub use chi2::ChiSquare;
pub use error::{Error, Result};
pub use gof::{GofTestResult, PhiSpec, SampleSizeReport};
pub use random::RandomSource;
pub use rank::{RankTestResult, ScoreFunction};
pub use types::{CountVector, ProbabilityVector, RankingMatrix, UnitWeights};
