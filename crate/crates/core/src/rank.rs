//! Method-of-n-rankings test statistics: a general score function with
//! derived constants, the classical statistic, and its externally randomized
//! counterpart. Friedman's and Brown-Mood's tests are the identity-score and
//! indicator-score specializations.

use crate::chi2::ChiSquare;
use crate::error::{Error, Result};
use crate::types::{RankingMatrix, UnitWeights};

/// A rank-score map J : {1, ..., r} -> R together with its derived
/// constants: the mean over ranks, the variance
/// sum (J(k) - mean)^2 / (r - 1), and the bound max_k |J(k) - mean|.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreFunction {
    values: Vec<f64>,
    mean: f64,
    variance: f64,
    bound: f64,
}

impl ScoreFunction {
    /// Build a score function from its values (J(1), ..., J(r)).
    ///
    /// A constant score has zero variance and would divide the statistic by
    /// zero, so it is rejected.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        let r = values.len();
        if r < 2 {
            return Err(Error::InvalidDimension(format!(
                "need at least 2 score values, got {r}"
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("score values must be finite".into()));
        }
        let mean = values.iter().sum::<f64>() / r as f64;
        let variance =
            values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (r as f64 - 1.0);
        if variance == 0.0 {
            return Err(Error::DegenerateScore);
        }
        let bound = values
            .iter()
            .map(|v| (v - mean).abs())
            .fold(0.0f64, f64::max);
        Ok(Self {
            values,
            mean,
            variance,
            bound,
        })
    }

    /// Identity scores J(k) = k (Friedman's test).
    pub fn identity(r: usize) -> Result<Self> {
        Self::new((1..=r).map(|k| k as f64).collect())
    }

    /// Indicator scores J(k) = 1(k <= a) for a in {1, ..., r-1}
    /// (Brown-Mood's test).
    pub fn indicator(r: usize, a: usize) -> Result<Self> {
        if a < 1 || a >= r {
            return Err(Error::Domain(format!(
                "indicator cutoff a must be in 1..={}, got {a}",
                r.saturating_sub(1)
            )));
        }
        Self::new((1..=r).map(|k| if k <= a { 1.0 } else { 0.0 }).collect())
    }

    pub fn r(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn variance(&self) -> f64 {
        self.variance
    }

    /// max_k |J(k) - mean|.
    pub fn bound(&self) -> f64 {
        self.bound
    }
}

/// Outcome of a rank test. The p-value is the chi-square(r-1) survival
/// function at the statistic.
#[derive(Debug, Clone, PartialEq)]
pub struct RankTestResult {
    pub statistic: f64,
    pub df: u32,
    pub p_value: f64,
    pub randomized: bool,
    pub weights_used: Option<UnitWeights>,
}

/// The n x r matrix of per-ranking score vectors, row i being
/// (J(pi_i1), ..., J(pi_ir)). Every row sums to r times the score mean.
pub fn score_vectors(rankings: &RankingMatrix, score: &ScoreFunction) -> Result<Vec<Vec<f64>>> {
    check_dims(rankings, score)?;
    Ok(rankings
        .rows()
        .map(|row| {
            row.iter()
                .map(|&rank| score.values()[rank as usize - 1])
                .collect()
        })
        .collect())
}

fn check_dims(rankings: &RankingMatrix, score: &ScoreFunction) -> Result<()> {
    if rankings.r() != score.r() {
        return Err(Error::DimensionMismatch {
            expected: rankings.r(),
            got: score.r(),
        });
    }
    Ok(())
}

fn finish(statistic: f64, r: usize, weights_used: Option<UnitWeights>) -> Result<RankTestResult> {
    let df = (r - 1) as u32;
    let p_value = ChiSquare::new(df)?.survival(statistic);
    Ok(RankTestResult {
        statistic,
        df,
        p_value,
        randomized: weights_used.is_some(),
        weights_used,
    })
}

/// Classical statistic: the squared norm of the summed centered score
/// vectors, scaled by 1 / (variance * n).
///
/// The r-dimensional sum is accumulated first, so the evaluation is O(nr)
/// time and O(r) space.
pub fn classical_rank_statistic(
    rankings: &RankingMatrix,
    score: &ScoreFunction,
) -> Result<RankTestResult> {
    check_dims(rankings, score)?;
    let r = rankings.r();
    let mut acc = vec![0.0f64; r];
    for row in rankings.rows() {
        for (j, &rank) in row.iter().enumerate() {
            acc[j] += score.values()[rank as usize - 1] - score.mean();
        }
    }
    let norm_sq: f64 = acc.iter().map(|v| v * v).sum();
    let statistic = norm_sq / (score.variance() * rankings.n() as f64);
    finish(statistic, r, None)
}

/// Randomized statistic: the same squared norm with the i-th centered score
/// vector weighted by theta_i, scaled by 1 / variance (no 1/n factor; the
/// unit norm of theta replaces it).
///
/// With theta = (1/sqrt(n), ..., 1/sqrt(n)) this reduces exactly to
/// [`classical_rank_statistic`].
pub fn randomized_rank_statistic(
    rankings: &RankingMatrix,
    score: &ScoreFunction,
    theta: &UnitWeights,
) -> Result<RankTestResult> {
    check_dims(rankings, score)?;
    if theta.len() != rankings.n() {
        return Err(Error::DimensionMismatch {
            expected: rankings.n(),
            got: theta.len(),
        });
    }
    let r = rankings.r();
    let mut acc = vec![0.0f64; r];
    for (row, &w) in rankings.rows().zip(theta.weights()) {
        for (j, &rank) in row.iter().enumerate() {
            acc[j] += w * (score.values()[rank as usize - 1] - score.mean());
        }
    }
    let norm_sq: f64 = acc.iter().map(|v| v * v).sum();
    let statistic = norm_sq / score.variance();
    finish(statistic, r, Some(theta.clone()))
}

/// Friedman's test (identity scores). `theta` absent runs the classical
/// statistic; present, the randomized one.
pub fn friedman(rankings: &RankingMatrix, theta: Option<&UnitWeights>) -> Result<RankTestResult> {
    let score = ScoreFunction::identity(rankings.r())?;
    match theta {
        None => classical_rank_statistic(rankings, &score),
        Some(t) => randomized_rank_statistic(rankings, &score, t),
    }
}

/// Brown-Mood's test (indicator scores with cutoff `a`).
pub fn brown_mood(
    rankings: &RankingMatrix,
    a: usize,
    theta: Option<&UnitWeights>,
) -> Result<RankTestResult> {
    let score = ScoreFunction::indicator(rankings.r(), a)?;
    match theta {
        None => classical_rank_statistic(rankings, &score),
        Some(t) => randomized_rank_statistic(rankings, &score, t),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{sample_rankings, sample_sphere, RandomSource};
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn score_constants_identity_r4() {
        let s = ScoreFunction::identity(4).unwrap();
        assert_abs_diff_eq!(s.mean(), 2.5, epsilon = 1e-12);
        assert_abs_diff_eq!(s.variance(), 5.0 / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(s.bound(), 1.5, epsilon = 1e-12);
    }

    #[test]
    fn score_constants_indicator_r4_a2() {
        let s = ScoreFunction::indicator(4, 2).unwrap();
        assert_abs_diff_eq!(s.mean(), 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(s.variance(), 1.0 / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(s.bound(), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn score_constants_match_closed_forms() {
        for r in 2..=8 {
            let s = ScoreFunction::identity(r).unwrap();
            assert_abs_diff_eq!(s.mean(), (r as f64 + 1.0) / 2.0, epsilon = 1e-12);
            assert_abs_diff_eq!(
                s.variance(),
                r as f64 * (r as f64 + 1.0) / 12.0,
                epsilon = 1e-12
            );
            for a in 1..r {
                let s = ScoreFunction::indicator(r, a).unwrap();
                let (rf, af) = (r as f64, a as f64);
                assert_abs_diff_eq!(s.mean(), af / rf, epsilon = 1e-12);
                assert_abs_diff_eq!(
                    s.variance(),
                    af * (rf - af) / (rf * (rf - 1.0)),
                    epsilon = 1e-12
                );
            }
        }
    }

    #[test]
    fn constant_score_rejected() {
        assert_eq!(
            ScoreFunction::new(vec![7.0, 7.0, 7.0]).unwrap_err(),
            Error::DegenerateScore
        );
    }

    #[test]
    fn score_vectors_examples() {
        let m = RankingMatrix::new(vec![vec![2, 1, 3]]).unwrap();
        let v = score_vectors(&m, &ScoreFunction::identity(3).unwrap()).unwrap();
        assert_eq!(v, vec![vec![2.0, 1.0, 3.0]]);

        let m = RankingMatrix::new(vec![vec![3, 1, 2]]).unwrap();
        let v = score_vectors(&m, &ScoreFunction::indicator(3, 1).unwrap()).unwrap();
        assert_eq!(v, vec![vec![0.0, 1.0, 0.0]]);
    }

    #[test]
    fn score_vector_rows_sum_to_r_times_mean() {
        let mut rng = RandomSource::new(21);
        for _ in 0..50 {
            let m = sample_rankings(8, 5, &mut rng).unwrap();
            let s = ScoreFunction::new(vec![0.3, -1.0, 2.5, 4.0, 4.0]).unwrap();
            for row in score_vectors(&m, &s).unwrap() {
                assert_abs_diff_eq!(
                    row.iter().sum::<f64>(),
                    5.0 * s.mean(),
                    epsilon = 1e-12
                );
            }
        }
    }

    #[test]
    fn classical_single_ranking_identity_r3() {
        // any permutation of {1,2,3}: squared centered norm 2, variance 1, n 1
        for rows in [vec![1u32, 2, 3], vec![2, 1, 3], vec![3, 2, 1]] {
            let m = RankingMatrix::new(vec![rows]).unwrap();
            let res = classical_rank_statistic(&m, &ScoreFunction::identity(3).unwrap()).unwrap();
            assert_abs_diff_eq!(res.statistic, 2.0, epsilon = 1e-12);
            assert_eq!(res.df, 2);
            assert!(!res.randomized);
        }
    }

    #[test]
    fn classical_identical_rankings_reach_maximum() {
        // n copies of the identity ranking give statistic n(r-1)
        for n in 1..=3usize {
            for r in 2..=4usize {
                let rows = vec![(1..=r as u32).collect::<Vec<_>>(); n];
                let m = RankingMatrix::new(rows).unwrap();
                let res =
                    classical_rank_statistic(&m, &ScoreFunction::identity(r).unwrap()).unwrap();
                assert_relative_eq!(
                    res.statistic,
                    (n * (r - 1)) as f64,
                    max_relative = 1e-12
                );
            }
        }
    }

    #[test]
    fn p_value_is_survival_of_statistic() {
        let mut rng = RandomSource::new(33);
        let m = sample_rankings(12, 4, &mut rng).unwrap();
        let res = friedman(&m, None).unwrap();
        let d = ChiSquare::new(3).unwrap();
        assert_eq!(res.p_value, d.survival(res.statistic));
    }

    #[test]
    fn equal_weights_reduce_to_classical() {
        let mut rng = RandomSource::new(4);
        for _ in 0..100 {
            let n = 2 + (rng.next_u64() % 49) as usize;
            let r = 2 + (rng.next_u64() % 5) as usize;
            let m = sample_rankings(n, r, &mut rng).unwrap();
            let score = ScoreFunction::identity(r).unwrap();
            let classical = classical_rank_statistic(&m, &score).unwrap();
            let randomized =
                randomized_rank_statistic(&m, &score, &UnitWeights::equal(n).unwrap()).unwrap();
            assert_relative_eq!(
                randomized.statistic,
                classical.statistic,
                max_relative = 1e-10
            );
            assert!(randomized.randomized);
            assert!(randomized.weights_used.is_some());
        }
    }

    #[test]
    fn concentrated_weights_give_single_observation_statistic() {
        let mut rng = RandomSource::new(8);
        let m = sample_rankings(6, 4, &mut rng).unwrap();
        let score = ScoreFunction::identity(4).unwrap();
        let mut w = vec![0.0; 6];
        w[0] = 1.0;
        let theta = UnitWeights::new(w).unwrap();
        let res = randomized_rank_statistic(&m, &score, &theta).unwrap();
        let single = RankingMatrix::new(vec![m.row(0).to_vec()]).unwrap();
        let expect = classical_rank_statistic(&single, &score).unwrap();
        assert_relative_eq!(res.statistic, expect.statistic, max_relative = 1e-12);
    }

    #[test]
    fn friedman_is_identity_score_statistic() {
        let mut rng = RandomSource::new(12);
        for _ in 0..100 {
            let n = 1 + (rng.next_u64() % 20) as usize;
            let r = 2 + (rng.next_u64() % 4) as usize;
            let m = sample_rankings(n, r, &mut rng).unwrap();
            let score = ScoreFunction::identity(r).unwrap();
            let a = friedman(&m, None).unwrap();
            let b = classical_rank_statistic(&m, &score).unwrap();
            assert_abs_diff_eq!(a.statistic, b.statistic, epsilon = 1e-12);
            let theta = sample_sphere(n, &mut rng).unwrap();
            let a = friedman(&m, Some(&theta)).unwrap();
            let b = randomized_rank_statistic(&m, &score, &theta).unwrap();
            assert_abs_diff_eq!(a.statistic, b.statistic, epsilon = 1e-12);
        }
    }

    #[test]
    fn brown_mood_equal_weights_matches_classical() {
        let mut rng = RandomSource::new(13);
        let m = sample_rankings(25, 5, &mut rng).unwrap();
        let theta = UnitWeights::equal(25).unwrap();
        let a = brown_mood(&m, 4, Some(&theta)).unwrap();
        let b = brown_mood(&m, 4, None).unwrap();
        assert_relative_eq!(a.statistic, b.statistic, max_relative = 1e-10);
    }

    #[test]
    fn brown_mood_cutoff_out_of_range() {
        let mut rng = RandomSource::new(14);
        let m = sample_rankings(5, 4, &mut rng).unwrap();
        assert!(brown_mood(&m, 0, None).is_err());
        assert!(brown_mood(&m, 4, None).is_err());
        assert!(brown_mood(&m, 3, None).is_ok());
    }

    #[test]
    fn affine_score_change_leaves_statistics_invariant() {
        let mut rng = RandomSource::new(15);
        for _ in 0..50 {
            let n = 2 + (rng.next_u64() % 30) as usize;
            let r = 3 + (rng.next_u64() % 3) as usize;
            let m = sample_rankings(n, r, &mut rng).unwrap();
            let base = ScoreFunction::identity(r).unwrap();
            let scaled = ScoreFunction::new(
                base.values().iter().map(|v| -2.5 * v + 7.0).collect(),
            )
            .unwrap();
            let theta = sample_sphere(n, &mut rng).unwrap();

            let t0 = classical_rank_statistic(&m, &base).unwrap().statistic;
            let t1 = classical_rank_statistic(&m, &scaled).unwrap().statistic;
            assert_relative_eq!(t0, t1, max_relative = 1e-9);

            let s0 = randomized_rank_statistic(&m, &base, &theta).unwrap().statistic;
            let s1 = randomized_rank_statistic(&m, &scaled, &theta)
                .unwrap()
                .statistic;
            assert_relative_eq!(s0, s1, max_relative = 1e-9);
        }
    }

    #[test]
    fn dimension_mismatches_detected() {
        let mut rng = RandomSource::new(16);
        let m = sample_rankings(4, 3, &mut rng).unwrap();
        let wrong_score = ScoreFunction::identity(4).unwrap();
        assert!(classical_rank_statistic(&m, &wrong_score).is_err());
        let score = ScoreFunction::identity(3).unwrap();
        let theta = UnitWeights::equal(5).unwrap();
        assert!(randomized_rank_statistic(&m, &score, &theta).is_err());
    }
}
