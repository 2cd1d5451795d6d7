//! Action costs from pairwise "which is harder" judgments.
//!
//! Under the Bradley-Terry model item `i` is judged harder than `j` with
//! probability `p_i / (p_i + p_j)`. Strengths are fitted by the
//! minorization-maximization fixed point
//!
//! ```text
//! p_i <- W_i / sum_{j != i} n_ij / (p_i + p_j)
//! ```
//!
//! where `W_i` is the number of wins of `i` and `n_ij` the number of
//! comparisons between `i` and `j`, renormalized to sum to one after every
//! sweep. The normalized strengths are reported as costs.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_ITER: usize = 10_000;

/// `wins[i][j]` counts judgments that item `i` is harder than item `j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairwiseComparisons {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub labels: Vec<String>,
    pub wins: Vec<Vec<u64>>,
}

impl PairwiseComparisons {
    pub fn new(wins: Vec<Vec<u64>>) -> Result<Self> {
        let c = PairwiseComparisons {
            labels: Vec::new(),
            wins,
        };
        c.validate_shape()?;
        Ok(c)
    }

    /// Builds the matrix from `(i, j, i_harder, j_harder)` tallies.
    pub fn from_pairs(n: usize, pairs: &[(usize, usize, u64, u64)]) -> Result<Self> {
        let mut wins = vec![vec![0; n]; n];
        for &(i, j, wi, wj) in pairs {
            if i >= n || j >= n || i == j {
                return Err(Error::invalid(format!(
                    "bad comparison pair ({i}, {j}) for {n} items"
                )));
            }
            wins[i][j] += wi;
            wins[j][i] += wj;
        }
        PairwiseComparisons::new(wins)
    }

    pub fn n(&self) -> usize {
        self.wins.len()
    }

    fn validate_shape(&self) -> Result<()> {
        let n = self.n();
        if n == 0 {
            return Err(Error::invalid("no items to compare"));
        }
        if self.wins.iter().any(|row| row.len() != n) {
            return Err(Error::invalid("win matrix must be square"));
        }
        if (0..n).any(|i| self.wins[i][i] != 0) {
            return Err(Error::invalid("win matrix diagonal must be zero"));
        }
        if !self.labels.is_empty() && self.labels.len() != n {
            return Err(Error::invalid("label count does not match the win matrix"));
        }
        Ok(())
    }

    fn check_identifiable(&self) -> Result<()> {
        let n = self.n();
        if let Some(i) = (0..n).find(|&i| self.wins[i].iter().sum::<u64>() == 0) {
            return Err(Error::Unidentifiable(format!(
                "item {i} never wins a comparison"
            )));
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for (j, s) in seen.iter_mut().enumerate() {
                if !*s && self.wins[i][j] + self.wins[j][i] > 0 {
                    *s = true;
                    stack.push(j);
                }
            }
        }
        if seen.iter().any(|&s| !s) {
            return Err(Error::Unidentifiable(
                "comparison graph is disconnected".into(),
            ));
        }
        Ok(())
    }
}

/// Fitted strengths, summing to one.
pub fn fit_bradley_terry(
    comparisons: &PairwiseComparisons,
    tol: f64,
    max_iter: usize,
) -> Result<Vec<f64>> {
    comparisons.validate_shape()?;
    comparisons.check_identifiable()?;
    let n = comparisons.n();
    let w = &comparisons.wins;
    let total_wins: Vec<f64> = w.iter().map(|row| row.iter().sum::<u64>() as f64).collect();
    let mut p = vec![1.0 / n as f64; n];
    for _ in 0..max_iter {
        let mut next: Vec<f64> = (0..n)
            .map(|i| {
                let denom: f64 = (0..n)
                    .filter(|&j| j != i)
                    .map(|j| (w[i][j] + w[j][i]) as f64 / (p[i] + p[j]))
                    .sum();
                total_wins[i] / denom
            })
            .collect();
        let sum: f64 = next.iter().sum();
        next.iter_mut().for_each(|v| *v /= sum);
        let change = next
            .iter()
            .zip(&p)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        p = next;
        if change < tol {
            return Ok(p);
        }
    }
    Err(Error::IterationLimit(max_iter))
}
