//! Game primitives: actions, the subject's instance, priors over the hidden
//! rule, and signaling policies.
//!
//! Feature vectors are `dim`-dimensional. Rules `theta` carry one extra
//! trailing coordinate, the bias, which multiplies an implicit constant 1
//! appended to every feature vector.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::regions::RegionKey;

/// Row entries of a [`SignalingPolicy`] may dip this far below zero.
pub const PROB_DUST: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Action {
    #[serde(skip)]
    pub id: usize,
    pub label: String,
    pub delta_x: Vec<f64>,
    pub cost: f64,
    pub dm_utility: f64,
}

impl Action {
    pub fn new(label: impl Into<String>, delta_x: Vec<f64>, cost: f64, dm_utility: f64) -> Self {
        Action {
            id: 0,
            label: label.into(),
            delta_x,
            cost,
            dm_utility,
        }
    }

    /// The do-nothing action.
    pub fn null(dim: usize) -> Self {
        Action::new("none", vec![0.0; dim], 0.0, 0.0)
    }

    pub fn is_null(&self) -> bool {
        self.cost == 0.0 && self.dm_utility == 0.0 && self.delta_x.iter().all(|&v| v == 0.0)
    }
}

/// A decision subject with initial features `x0` choosing among `actions`.
/// Action 0 is always the null action.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Instance {
    dim: usize,
    actions: Vec<Action>,
    x0: Vec<f64>,
}

impl Instance {
    pub fn new(dim: usize, actions: Vec<Action>, x0: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("feature dimension must be positive"));
        }
        if x0.len() != dim {
            return Err(Error::invalid(format!(
                "x0 has length {}, expected {dim}",
                x0.len()
            )));
        }
        if x0.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("x0 must be finite"));
        }
        let Some(first) = actions.first() else {
            return Err(Error::invalid("instance needs at least the null action"));
        };
        if first.delta_x.len() != dim || !first.is_null() {
            return Err(Error::invalid(
                "action 0 must be the null action (zero delta, zero cost, zero utility)",
            ));
        }
        let mut actions = actions;
        for (id, action) in actions.iter_mut().enumerate() {
            if action.delta_x.len() != dim {
                return Err(Error::invalid(format!(
                    "action {id} ({}) has delta of length {}, expected {dim}",
                    action.label,
                    action.delta_x.len()
                )));
            }
            if !(action.cost.is_finite() && action.cost >= 0.0) {
                return Err(Error::invalid(format!(
                    "action {id} has invalid cost {}",
                    action.cost
                )));
            }
            if !action.dm_utility.is_finite() || action.delta_x.iter().any(|v| !v.is_finite()) {
                return Err(Error::invalid(format!(
                    "action {id} has non-finite entries"
                )));
            }
            action.id = id;
        }
        Ok(Instance { dim, actions, x0 })
    }

    /// Builds an instance from the non-null actions, prepending the null action.
    pub fn with_null(dim: usize, others: Vec<Action>, x0: Vec<f64>) -> Result<Self> {
        let mut actions = Vec::with_capacity(others.len() + 1);
        actions.push(Action::null(dim));
        actions.extend(others);
        Instance::new(dim, actions, x0)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Length of rule vectors, `dim + 1`.
    pub fn theta_dim(&self) -> usize {
        self.dim + 1
    }

    pub fn actions(&self) -> &[Action] {
        &self.actions
    }

    pub fn num_actions(&self) -> usize {
        self.actions.len()
    }

    pub fn x0(&self) -> &[f64] {
        &self.x0
    }

    pub fn action(&self, id: usize) -> Result<&Action> {
        self.actions.get(id).ok_or_else(|| {
            Error::invalid(format!(
                "action id {id} out of range (have {})",
                self.actions.len()
            ))
        })
    }

    pub(crate) fn check_theta(&self, theta: &[f64]) -> Result<()> {
        if theta.len() != self.theta_dim() {
            return Err(Error::invalid(format!(
                "theta has length {}, expected {}",
                theta.len(),
                self.theta_dim()
            )));
        }
        Ok(())
    }

    /// Score `([x0, 1] + [delta_x(a), 0]) . theta`. No bounds checks.
    pub(crate) fn score(&self, theta: &[f64], action: usize) -> f64 {
        let delta = &self.actions[action].delta_x;
        let linear: f64 = self
            .x0
            .iter()
            .zip(delta)
            .zip(theta)
            .map(|((x, d), t)| (x + d) * t)
            .sum();
        linear + theta[self.dim]
    }

    pub(crate) fn is_positive(&self, theta: &[f64], action: usize) -> bool {
        self.score(theta, action) >= 0.0
    }

    /// Classification outcome after taking `action`: `+1` or `-1`.
    /// A score of exactly zero is accepted.
    pub fn classify(&self, theta: &[f64], action: usize) -> Result<i8> {
        self.check_theta(theta)?;
        self.action(action)?;
        Ok(if self.is_positive(theta, action) {
            1
        } else {
            -1
        })
    }

    /// `sign - cost(action)`; the rule only matters through `positive`.
    pub fn subject_utility(&self, action: usize, positive: bool) -> Result<f64> {
        let a = self.action(action)?;
        Ok(outcome_value(positive) - a.cost)
    }

    pub(crate) fn utility_unchecked(&self, action: usize, positive: bool) -> f64 {
        outcome_value(positive) - self.actions[action].cost
    }
}

fn outcome_value(positive: bool) -> f64 {
    if positive {
        1.0
    } else {
        -1.0
    }
}

/// Finite-support belief over rules.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscretePrior {
    support: Vec<Vec<f64>>,
    probs: Vec<f64>,
}

impl DiscretePrior {
    pub fn new(support: Vec<Vec<f64>>, probs: Vec<f64>) -> Result<Self> {
        if support.is_empty() || support.len() != probs.len() {
            return Err(Error::invalid(format!(
                "prior needs equal, nonzero support ({}) and probability ({}) lengths",
                support.len(),
                probs.len()
            )));
        }
        let width = support[0].len();
        if support.iter().any(|t| t.len() != width) {
            return Err(Error::invalid("prior support points differ in length"));
        }
        if probs.iter().any(|&p| !(p >= 0.0 && p.is_finite())) {
            return Err(Error::invalid("prior probabilities must be nonnegative"));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::invalid(format!(
                "prior probabilities sum to {total}, not 1"
            )));
        }
        Ok(DiscretePrior { support, probs })
    }

    pub fn uniform(support: Vec<Vec<f64>>) -> Result<Self> {
        let n = support.len();
        if n == 0 {
            return Err(Error::invalid("empty prior support"));
        }
        let p = 1.0 / n as f64;
        let mut probs = vec![p; n];
        // keep the sum within tolerance for awkward n
        let drift: f64 = 1.0 - probs.iter().sum::<f64>();
        probs[n - 1] += drift;
        DiscretePrior::new(support, probs)
    }

    pub fn point_mass(theta: Vec<f64>) -> Self {
        DiscretePrior {
            support: vec![theta],
            probs: vec![1.0],
        }
    }

    pub fn support(&self) -> &[Vec<f64>] {
        &self.support
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn theta_dim(&self) -> usize {
        self.support[0].len()
    }
}

/// Independent Gaussian belief over each coordinate of the rule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianPrior {
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
}

impl GaussianPrior {
    pub fn new(mean: Vec<f64>, std: Vec<f64>) -> Result<Self> {
        if mean.is_empty() || mean.len() != std.len() {
            return Err(Error::invalid(
                "gaussian prior mean/std lengths differ or are empty",
            ));
        }
        if std.iter().any(|&s| !(s >= 0.0 && s.is_finite())) {
            return Err(Error::invalid(
                "gaussian prior std entries must be finite and >= 0",
            ));
        }
        if mean.iter().any(|m| !m.is_finite()) {
            return Err(Error::invalid("gaussian prior mean must be finite"));
        }
        Ok(GaussianPrior { mean, std })
    }

    pub fn theta_dim(&self) -> usize {
        self.mean.len()
    }
}

/// One recommendation distribution per region, indexed by action.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignalingPolicy {
    regions: Vec<RegionKey>,
    probs: Vec<Vec<f64>>,
}

impl SignalingPolicy {
    pub fn new(regions: Vec<RegionKey>, probs: Vec<Vec<f64>>) -> Result<Self> {
        if regions.len() != probs.len() {
            return Err(Error::invalid(
                "policy needs one probability row per region",
            ));
        }
        for (key, row) in regions.iter().zip(&probs) {
            if row.len() != key.len() {
                return Err(Error::invalid(format!(
                    "policy row for {key} has {} entries, expected {}",
                    row.len(),
                    key.len()
                )));
            }
            if row.iter().any(|&p| !p.is_finite() || p < -PROB_DUST) {
                return Err(Error::invalid(format!(
                    "policy row for {key} has a negative entry"
                )));
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > PROB_DUST {
                return Err(Error::invalid(format!(
                    "policy row for {key} sums to {sum}"
                )));
            }
        }
        Ok(SignalingPolicy { regions, probs })
    }

    pub fn regions(&self) -> &[RegionKey] {
        &self.regions
    }

    /// Raw rows as stored, including any numerical dust.
    pub fn rows(&self) -> &[Vec<f64>] {
        &self.probs
    }

    pub fn num_actions(&self) -> usize {
        self.probs.first().map_or(0, Vec::len)
    }

    /// Row for a region, negative dust clamped to zero.
    pub fn row(&self, key: &RegionKey) -> Option<Vec<f64>> {
        self.regions
            .iter()
            .position(|k| k == key)
            .map(|i| self.probs[i].iter().map(|&p| p.max(0.0)).collect())
    }

    /// `p(signal = action | region)`, clamped.
    pub fn prob(&self, key: &RegionKey, action: usize) -> Option<f64> {
        let i = self.regions.iter().position(|k| k == key)?;
        self.probs[i].get(action).map(|&p| p.max(0.0))
    }
}
