//! Equivalence regions of rules.
//!
//! The subject's utility depends on the rule only through which actions end
//! up classified positively. Two outcome profiles are interchangeable
//! exactly when they induce the same pairwise utility differences, which
//! happens only for equal profiles and for the all-negative / all-positive
//! pair. A [`RegionKey`] is the outcome profile with all-negative rewritten
//! as all-positive.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{DiscretePrior, Instance};
use crate::sampling::{seeded_rng, ThetaSampler};

/// Canonical per-action outcome vector; `true` means positive classification.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct RegionKey {
    outcomes: Vec<bool>,
}

impl RegionKey {
    /// Canonicalizes the raw outcome vector.
    pub fn from_outcomes(mut outcomes: Vec<bool>) -> Self {
        if outcomes.iter().all(|&o| !o) {
            outcomes.iter_mut().for_each(|o| *o = true);
        }
        RegionKey { outcomes }
    }

    pub fn outcomes(&self) -> &[bool] {
        &self.outcomes
    }

    pub fn is_positive(&self, action: usize) -> bool {
        self.outcomes[action]
    }

    pub fn len(&self) -> usize {
        self.outcomes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outcomes.is_empty()
    }
}

impl fmt::Display for RegionKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &o in &self.outcomes {
            f.write_str(if o { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for RegionKey {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let outcomes = s
            .chars()
            .map(|c| match c {
                '1' => Ok(true),
                '0' => Ok(false),
                other => Err(Error::invalid(format!(
                    "bad region key character {other:?} in {s:?}"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        if outcomes.is_empty() {
            return Err(Error::invalid("empty region key"));
        }
        Ok(RegionKey::from_outcomes(outcomes))
    }
}

impl From<RegionKey> for String {
    fn from(k: RegionKey) -> String {
        k.to_string()
    }
}

impl TryFrom<String> for RegionKey {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

/// A region together with its prior mass and the support points inside it.
#[derive(Debug, Clone, PartialEq)]
pub struct Region {
    pub key: RegionKey,
    pub mass: f64,
    pub members: Vec<usize>,
}

pub fn region_key(instance: &Instance, theta: &[f64]) -> Result<RegionKey> {
    instance.check_theta(theta)?;
    Ok(key_unchecked(instance, theta))
}

pub(crate) fn key_unchecked(instance: &Instance, theta: &[f64]) -> RegionKey {
    RegionKey::from_outcomes(
        (0..instance.num_actions())
            .map(|a| instance.is_positive(theta, a))
            .collect(),
    )
}

/// Groups the prior's support by region, ordered by key.
pub fn enumerate_regions(instance: &Instance, prior: &DiscretePrior) -> Result<Vec<Region>> {
    if prior.theta_dim() != instance.theta_dim() {
        return Err(Error::invalid(format!(
            "prior rules have length {}, instance expects {}",
            prior.theta_dim(),
            instance.theta_dim()
        )));
    }
    let mut groups: BTreeMap<RegionKey, (f64, Vec<usize>)> = BTreeMap::new();
    for (i, (theta, &p)) in prior.support().iter().zip(prior.probs()).enumerate() {
        let entry = groups.entry(key_unchecked(instance, theta)).or_default();
        entry.0 += p;
        entry.1.push(i);
    }
    Ok(groups
        .into_iter()
        .map(|(key, (mass, members))| Region { key, mass, members })
        .collect())
}

/// `a` is dominated by `a_prime` when its feature change is componentwise
/// no larger and strictly smaller somewhere.
pub fn is_dominated(instance: &Instance, a: usize, a_prime: usize) -> Result<bool> {
    let lhs = &instance.action(a)?.delta_x;
    let rhs = &instance.action(a_prime)?.delta_x;
    let weakly = lhs.iter().zip(rhs).all(|(x, y)| x <= y);
    let strictly = lhs.iter().zip(rhs).any(|(x, y)| x < y);
    Ok(weakly && strictly)
}

/// Region count for single-feature actions: product of per-feature levels, minus one.
///
/// Evaluated verbatim; note that the two-feature, one-action-per-feature
/// picture only comes out right when each entry counts outcome levels
/// (actions on that feature plus one). [`empirical_region_count`] is the
/// ground truth for any concrete instance.
pub fn theoretical_region_count(m_per_feature: &[u64]) -> Result<u64> {
    if m_per_feature.is_empty() {
        return Err(Error::invalid("need at least one feature"));
    }
    if m_per_feature.contains(&0) {
        return Err(Error::invalid("per-feature counts must be positive"));
    }
    let product = m_per_feature
        .iter()
        .try_fold(1u64, |acc, &m| acc.checked_mul(m))
        .ok_or_else(|| Error::invalid("region count overflows u64"))?;
    Ok(product - 1)
}

/// Number of distinct keys among `n` seeded draws.
pub fn empirical_region_count<S: ThetaSampler>(
    instance: &Instance,
    sampler: &S,
    n: usize,
    seed: u64,
) -> Result<usize> {
    if n == 0 {
        return Err(Error::invalid("need at least one sample"));
    }
    if sampler.theta_dim() != instance.theta_dim() {
        return Err(Error::invalid("sampler dimension does not match instance"));
    }
    let mut rng = seeded_rng(seed);
    let keys: BTreeSet<RegionKey> = (0..n)
        .map(|_| key_unchecked(instance, &sampler.sample(&mut rng)))
        .collect();
    Ok(keys.len())
}
