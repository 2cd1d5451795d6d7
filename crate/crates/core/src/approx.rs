//! Sampling-based signaling for priors that can only be sampled.
//!
//! The true rule is hidden among `K` draws from the prior at a uniformly
//! random position. Regions and their empirical masses come from those `K`
//! rules, and the signaling program is solved with every incentive
//! constraint relaxed by `eps`. The returned recommendation distribution is
//! the row for the true rule's region. With `K` from [`sample_count`] the
//! result is `eps`-incentive-compatible and, with probability at least
//! `1 - delta`, within `eps` of the optimum.

use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{self, best_response, policy_from_solution, BIC_TOL};
use crate::lp::{self, LpStatus};
use crate::model::{Instance, SignalingPolicy};
use crate::regions::{key_unchecked, Region, RegionKey};
use crate::sampling::{seeded_rng, ThetaSampler};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApproxReport {
    /// Recommendation distribution for the true rule's region.
    pub recommendation_dist: Vec<f64>,
    pub true_region: RegionKey,
    #[serde(skip)]
    pub sampled_regions: Vec<Region>,
    /// Solution of the relaxed program over every sampled region.
    pub full_policy: SignalingPolicy,
    pub lp_value: f64,
    pub epsilon: f64,
    pub delta: f64,
    pub k: usize,
    pub seed: u64,
}

/// `ceil((2 / eps^2) ln(2 (m^2 + 1) / delta))`, with `m` counting every
/// action including the null one.
pub fn sample_count(epsilon: f64, delta: f64, m: usize) -> Result<usize> {
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Error::invalid(format!(
            "epsilon must lie in (0, 1], got {epsilon}"
        )));
    }
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::invalid(format!(
            "delta must lie in (0, 1], got {delta}"
        )));
    }
    if m == 0 {
        return Err(Error::invalid("need at least one action"));
    }
    let m = m as f64;
    let k = (2.0 / (epsilon * epsilon)) * (2.0 * (m * m + 1.0) / delta).ln();
    Ok(k.ceil() as usize)
}

fn check_dm_range(instance: &Instance) -> Result<()> {
    for a in instance.actions() {
        if !(0.0..=1.0).contains(&a.dm_utility) {
            return Err(Error::Precondition(format!(
                "decision-maker utility of {} is {}, outside [0, 1]",
                a.label, a.dm_utility
            )));
        }
    }
    Ok(())
}

pub fn approximate_policy<S: ThetaSampler>(
    instance: &Instance,
    sampler: &S,
    theta_true: &[f64],
    epsilon: f64,
    delta: f64,
    seed: u64,
) -> Result<ApproxReport> {
    check_dm_range(instance)?;
    instance.check_theta(theta_true)?;
    if sampler.theta_dim() != instance.theta_dim() {
        return Err(Error::invalid("sampler dimension does not match instance"));
    }
    let k = sample_count(epsilon, delta, instance.num_actions())?;

    let mut rng = seeded_rng(seed);
    let slot = rng.random_range(0..k);
    let mut counts: BTreeMap<RegionKey, Vec<usize>> = BTreeMap::new();
    for i in 0..k {
        let key = if i == slot {
            key_unchecked(instance, theta_true)
        } else {
            key_unchecked(instance, &sampler.sample(&mut rng))
        };
        counts.entry(key).or_default().push(i);
    }
    let sampled_regions: Vec<Region> = counts
        .into_iter()
        .map(|(key, members)| Region {
            key,
            mass: members.len() as f64 / k as f64,
            members,
        })
        .collect();

    let problem = exact::signaling_lp(instance, &sampled_regions, epsilon)?;
    let solution = lp::solve(&problem)?;
    if solution.status != LpStatus::Optimal {
        return Err(Error::Solver(format!(
            "relaxed program reported {:?}",
            solution.status
        )));
    }
    let full_policy = policy_from_solution(instance, &sampled_regions, &solution.x)?;
    let true_region = key_unchecked(instance, theta_true);
    let recommendation_dist = full_policy
        .row(&true_region)
        .ok_or_else(|| Error::Solver("true region missing from sampled regions".into()))?;
    Ok(ApproxReport {
        recommendation_dist,
        true_region,
        sampled_regions,
        full_policy,
        lp_value: solution.value,
        epsilon,
        delta,
        k,
        seed,
    })
}

/// Smallest empirical incentive slack of `full_policy` over the report's
/// sampled regions; `eps`-compatibility means this is at least `-eps`.
pub fn verify_eps_bic(
    instance: &Instance,
    report: &ApproxReport,
    full_policy: &SignalingPolicy,
) -> Result<f64> {
    exact::verify_bic(instance, &report.sampled_regions, full_policy)
}

/// True when [`verify_eps_bic`] is within tolerance of `-eps`.
pub fn is_eps_bic(instance: &Instance, report: &ApproxReport) -> Result<bool> {
    Ok(verify_eps_bic(instance, report, &report.full_policy)? >= -report.epsilon - BIC_TOL)
}

/// Rewrites `optimal` so every recommendation is either large (marginal
/// probability above `eps / (2m)`) or honest.
///
/// Each small signal's mass in a region moves to that region's best
/// response. Incentive compatibility survives, and with decision-maker
/// utilities in `[0, 1]` the value drops by at most `eps / 2`.
pub fn large_or_honest_policy(
    instance: &Instance,
    regions: &[Region],
    optimal: &SignalingPolicy,
    epsilon: f64,
) -> Result<SignalingPolicy> {
    let na = instance.num_actions();
    let mut rows = regions
        .iter()
        .map(|r| {
            optimal
                .row(&r.key)
                .ok_or_else(|| Error::invalid(format!("policy has no row for region {}", r.key)))
        })
        .collect::<Result<Vec<_>>>()?;
    let threshold = epsilon / (2.0 * na as f64);
    let small: Vec<bool> = (0..na)
        .map(|a| {
            let marginal: f64 = regions
                .iter()
                .zip(&rows)
                .map(|(r, row)| r.mass * row[a])
                .sum();
            marginal <= threshold
        })
        .collect();
    for (region, row) in regions.iter().zip(rows.iter_mut()) {
        let honest = best_response(instance, &region.key);
        for a in (0..na).filter(|&a| small[a] && a != honest) {
            row[honest] += row[a];
            row[a] = 0.0;
        }
    }
    SignalingPolicy::new(regions.iter().map(|r| r.key.clone()).collect(), rows)
}
