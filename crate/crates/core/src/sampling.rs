//! Seeded draws of rule vectors.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::model::{DiscretePrior, GaussianPrior};

/// The generator behind every seeded routine in the crate.
pub type SeededRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Anything that can draw a rule vector.
pub trait ThetaSampler {
    fn theta_dim(&self) -> usize;

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64>;
}

impl ThetaSampler for GaussianPrior {
    fn theta_dim(&self) -> usize {
        self.mean.len()
    }

    // Every coordinate consumes one normal draw, even with zero std, so
    // priors that differ only in scale share the same underlying stream.
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        self.mean
            .iter()
            .zip(&self.std)
            .map(|(m, s)| {
                let z: f64 = rng.sample(StandardNormal);
                m + s * z
            })
            .collect()
    }
}

impl ThetaSampler for DiscretePrior {
    fn theta_dim(&self) -> usize {
        DiscretePrior::theta_dim(self)
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        for (theta, p) in self.support().iter().zip(self.probs()) {
            acc += p;
            if u < acc {
                return theta.clone();
            }
        }
        // rounding left u above the final cumulative sum
        let last = self
            .probs()
            .iter()
            .rposition(|&p| p > 0.0)
            .unwrap_or(self.len() - 1);
        self.support()[last].clone()
    }
}

/// Always returns the same rule.
#[derive(Debug, Clone, PartialEq)]
pub struct PointMass(pub Vec<f64>);

impl ThetaSampler for PointMass {
    fn theta_dim(&self) -> usize {
        self.0.len()
    }

    fn sample<R: Rng + ?Sized>(&self, _rng: &mut R) -> Vec<f64> {
        self.0.clone()
    }
}

/// Uniform over an axis-aligned box; `lo[i] == hi[i]` pins a coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct UniformBox {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl ThetaSampler for UniformBox {
    fn theta_dim(&self) -> usize {
        self.lo.len()
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(&lo, &hi)| {
                let u: f64 = rng.random();
                lo + (hi - lo) * u
            })
            .collect()
    }
}
