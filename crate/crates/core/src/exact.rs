//! Optimal signaling for a discrete prior, and the two reference policies
//! (reveal everything, reveal nothing).
//!
//! The program has one variable `p(signal = a | R)` per region and action,
//! laid out region-major. For every ordered pair `(a, a')` the incentive row
//! requires that a subject told `a` does not prefer `a'` in expectation:
//!
//! ```text
//! sum_R p(a | R) p(R) (u(a, R) - u(a', R)) >= 0
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lp::{self, LpProblem, LpStatus};
use crate::model::{DiscretePrior, Instance, SignalingPolicy};
use crate::regions::{enumerate_regions, Region, RegionKey};

/// Incentive constraints may be violated by at most this much.
pub const BIC_TOL: f64 = 1e-7;

const TIE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub policy: SignalingPolicy,
    pub dm_value: f64,
    pub bic_slack: f64,
    pub region_masses: Vec<f64>,
}

pub(crate) fn var_index(num_actions: usize, region: usize, action: usize) -> usize {
    region * num_actions + action
}

/// Incentive rows for an optional additive relaxation `eps` inside the weighted sum.
pub(crate) fn signaling_lp(instance: &Instance, regions: &[Region], eps: f64) -> Result<LpProblem> {
    if regions.is_empty() {
        return Err(Error::invalid("no regions to build a program over"));
    }
    let na = instance.num_actions();
    if let Some(r) = regions.iter().find(|r| r.key.len() != na) {
        return Err(Error::invalid(format!(
            "region key {} does not match {na} actions",
            r.key
        )));
    }
    let nv = regions.len() * na;
    let mut objective = vec![0.0; nv];
    for (ri, region) in regions.iter().enumerate() {
        for (a, action) in instance.actions().iter().enumerate() {
            objective[var_index(na, ri, a)] = region.mass * action.dm_utility;
        }
    }
    let mut problem = LpProblem::new(objective);
    for a in 0..na {
        for alt in 0..na {
            let mut row = vec![0.0; nv];
            for (ri, region) in regions.iter().enumerate() {
                let gap = utility_gap(instance, &region.key, a, alt);
                row[var_index(na, ri, a)] = region.mass * (gap + eps);
            }
            problem.add_ge(row, 0.0);
        }
    }
    for ri in 0..regions.len() {
        let mut row = vec![0.0; nv];
        row[var_index(na, ri, 0)..var_index(na, ri + 1, 0)].fill(1.0);
        problem.add_eq(row, 1.0);
    }
    Ok(problem)
}

fn utility_gap(instance: &Instance, key: &RegionKey, a: usize, alt: usize) -> f64 {
    instance.utility_unchecked(a, key.is_positive(a))
        - instance.utility_unchecked(alt, key.is_positive(alt))
}

/// The optimal-signaling program over `regions`; vacuous `a = a'` rows are kept.
pub fn build_opt_lp(instance: &Instance, regions: &[Region]) -> Result<LpProblem> {
    signaling_lp(instance, regions, 0.0)
}

pub(crate) fn policy_from_solution(
    instance: &Instance,
    regions: &[Region],
    x: &[f64],
) -> Result<SignalingPolicy> {
    let na = instance.num_actions();
    let keys = regions.iter().map(|r| r.key.clone()).collect();
    let rows = (0..regions.len())
        .map(|ri| {
            let raw = &x[var_index(na, ri, 0)..var_index(na, ri + 1, 0)];
            let clamped: Vec<f64> = raw.iter().map(|&p| p.max(0.0)).collect();
            let sum: f64 = clamped.iter().sum();
            clamped.into_iter().map(|p| p / sum).collect()
        })
        .collect();
    SignalingPolicy::new(keys, rows)
}

/// Solves for the decision maker's optimal incentive-compatible policy.
///
/// Zero-mass regions are left out of the program and receive the honest
/// recommendation in the returned policy.
pub fn solve_optimal_policy(instance: &Instance, prior: &DiscretePrior) -> Result<SolveReport> {
    let regions = enumerate_regions(instance, prior)?;
    solve_over_regions(instance, &regions)
}

pub fn solve_over_regions(instance: &Instance, regions: &[Region]) -> Result<SolveReport> {
    let live: Vec<Region> = regions.iter().filter(|r| r.mass > 0.0).cloned().collect();
    let problem = build_opt_lp(instance, &live)?;
    let solution = lp::solve(&problem)?;
    if solution.status != LpStatus::Optimal {
        return Err(Error::Solver(format!(
            "signaling program reported {:?}; the honest policy is always feasible",
            solution.status
        )));
    }
    let live_policy = policy_from_solution(instance, &live, &solution.x)?;
    let na = instance.num_actions();
    let rows = regions
        .iter()
        .map(|r| {
            live_policy.row(&r.key).unwrap_or_else(|| {
                let mut row = vec![0.0; na];
                row[best_response(instance, &r.key)] = 1.0;
                row
            })
        })
        .collect();
    let policy = SignalingPolicy::new(regions.iter().map(|r| r.key.clone()).collect(), rows)?;
    let dm_value = expected_dm_utility(instance, regions, &policy)?;
    let bic_slack = verify_bic(instance, regions, &policy)?;
    Ok(SolveReport {
        policy,
        dm_value,
        bic_slack,
        region_masses: regions.iter().map(|r| r.mass).collect(),
    })
}

/// Picks the highest-scoring action; near-ties go to the cheapest, then lowest id.
fn argmax_by_cost(instance: &Instance, score: impl Fn(usize) -> f64) -> usize {
    let mut best = 0;
    let mut best_score = score(0);
    for a in 1..instance.num_actions() {
        let s = score(a);
        let cost = instance.actions()[a].cost;
        let best_cost = instance.actions()[best].cost;
        if s > best_score + TIE_TOL || ((s - best_score).abs() <= TIE_TOL && cost < best_cost) {
            best = a;
            best_score = s;
        }
    }
    best
}

/// The subject's best action when the region is known.
pub fn best_response(instance: &Instance, key: &RegionKey) -> usize {
    argmax_by_cost(instance, |a| {
        instance.utility_unchecked(a, key.is_positive(a))
    })
}

pub fn full_information_value(instance: &Instance, prior: &DiscretePrior) -> Result<f64> {
    let regions = enumerate_regions(instance, prior)?;
    Ok(regions
        .iter()
        .map(|r| r.mass * instance.actions()[best_response(instance, &r.key)].dm_utility)
        .sum())
}

/// The action a subject takes on the prior alone, and its value to the decision maker.
pub fn no_information_value(instance: &Instance, prior: &DiscretePrior) -> Result<(usize, f64)> {
    let regions = enumerate_regions(instance, prior)?;
    let choice = argmax_by_cost(instance, |a| {
        regions
            .iter()
            .map(|r| r.mass * instance.utility_unchecked(a, r.key.is_positive(a)))
            .sum()
    });
    Ok((choice, instance.actions()[choice].dm_utility))
}

fn policy_rows(
    instance: &Instance,
    regions: &[Region],
    policy: &SignalingPolicy,
) -> Result<Vec<Vec<f64>>> {
    if policy.num_actions() != instance.num_actions() {
        return Err(Error::invalid(
            "policy and instance disagree on the number of actions",
        ));
    }
    regions
        .iter()
        .map(|r| {
            policy
                .row(&r.key)
                .ok_or_else(|| Error::invalid(format!("policy has no row for region {}", r.key)))
        })
        .collect()
}

/// Smallest incentive slack over pairs `a != a'` where `a` is recommended
/// with positive probability. Zero when there is nothing to check.
pub fn verify_bic(
    instance: &Instance,
    regions: &[Region],
    policy: &SignalingPolicy,
) -> Result<f64> {
    let rows = policy_rows(instance, regions, policy)?;
    Ok(min_weighted_slack(instance, regions, &rows))
}

pub(crate) fn min_weighted_slack(
    instance: &Instance,
    regions: &[Region],
    rows: &[Vec<f64>],
) -> f64 {
    let na = instance.num_actions();
    let mut slack = f64::INFINITY;
    for a in 0..na {
        let marginal: f64 = regions
            .iter()
            .zip(rows)
            .map(|(r, row)| r.mass * row[a])
            .sum();
        if marginal <= 0.0 {
            continue;
        }
        for alt in (0..na).filter(|&alt| alt != a) {
            let lhs: f64 = regions
                .iter()
                .zip(rows)
                .map(|(r, row)| row[a] * r.mass * utility_gap(instance, &r.key, a, alt))
                .sum();
            slack = slack.min(lhs);
        }
    }
    if slack.is_finite() {
        slack
    } else {
        0.0
    }
}

pub fn expected_dm_utility(
    instance: &Instance,
    regions: &[Region],
    policy: &SignalingPolicy,
) -> Result<f64> {
    let rows = policy_rows(instance, regions, policy)?;
    Ok(regions
        .iter()
        .zip(&rows)
        .map(|(r, row)| {
            r.mass
                * row
                    .iter()
                    .zip(instance.actions())
                    .map(|(p, a)| p * a.dm_utility)
                    .sum::<f64>()
        })
        .sum())
}

/// Policy recommending each region's best response.
pub fn honest_policy(instance: &Instance, regions: &[Region]) -> Result<SignalingPolicy> {
    let na = instance.num_actions();
    let rows = regions
        .iter()
        .map(|r| {
            let mut row = vec![0.0; na];
            row[best_response(instance, &r.key)] = 1.0;
            row
        })
        .collect();
    SignalingPolicy::new(regions.iter().map(|r| r.key.clone()).collect(), rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Action;

    fn credit(cost: f64) -> Instance {
        Instance::with_null(
            1,
            vec![Action::new("pay", vec![40.0], cost, 1.0)],
            vec![660.0],
        )
        .unwrap()
    }

    /// Low / middle / high thresholds with the given masses.
    fn credit_prior(masses: [f64; 3]) -> DiscretePrior {
        DiscretePrior::new(
            vec![vec![1.0, -750.0], vec![1.0, -680.0], vec![1.0, -600.0]],
            masses.to_vec(),
        )
        .unwrap()
    }

    #[test]
    fn structure_counts() {
        let inst = credit(0.5);
        let one = enumerate_regions(&inst, &DiscretePrior::point_mass(vec![1.0, -680.0])).unwrap();
        let lp = build_opt_lp(&inst, &one).unwrap();
        assert_eq!(
            (lp.num_vars(), lp.ineq_lhs.len(), lp.eq_lhs.len()),
            (2, 4, 1)
        );

        let three: Vec<Region> = ["01", "11", "10"]
            .iter()
            .map(|k| Region {
                key: k.parse().unwrap(),
                mass: 1.0 / 3.0,
                members: vec![],
            })
            .collect();
        let lp = build_opt_lp(&inst, &three).unwrap();
        assert_eq!(
            (lp.num_vars(), lp.ineq_lhs.len(), lp.eq_lhs.len()),
            (6, 4, 3)
        );
        assert!(build_opt_lp(&inst, &[]).is_err());
    }

    #[test]
    fn pay_vs_nothing_row_matches_closed_form() {
        // row (a1, null): -q (pL + pH) c + pM (2 - c) >= 0 with q the shared
        // recommendation probability outside the middle region
        let c = 0.6;
        let inst = credit(c);
        let masses = [0.2, 0.3, 0.5];
        let regions = enumerate_regions(&inst, &credit_prior(masses)).unwrap();
        let lp = build_opt_lp(&inst, &regions).unwrap();
        let row = &lp.ineq_lhs[2];
        // regions sorted: "01" (middle) then "11" (low + high)
        assert_eq!(regions[0].key.to_string(), "01");
        assert!((row[1] - masses[1] * (2.0 - c)).abs() < 1e-12);
        assert!((row[3] - (masses[0] + masses[2]) * (-c)).abs() < 1e-12);
        assert_eq!(row[0], 0.0);
        assert_eq!(row[2], 0.0);
    }

    #[test]
    fn indifferent_subject_follows_recommendation() {
        // single region, subject utility equal for both actions
        let inst =
            Instance::with_null(1, vec![Action::new("free", vec![0.0], 0.0, 1.0)], vec![1.0])
                .unwrap();
        let report =
            solve_optimal_policy(&inst, &DiscretePrior::point_mass(vec![1.0, 0.0])).unwrap();
        assert!((report.dm_value - 1.0).abs() < 1e-9);
        assert!(report.bic_slack >= -BIC_TOL);
    }

    #[test]
    fn point_mass_equals_full_information() {
        let inst = credit(0.5);
        for theta in [vec![1.0, -680.0], vec![1.0, -750.0], vec![1.0, -600.0]] {
            let prior = DiscretePrior::point_mass(theta);
            let report = solve_optimal_policy(&inst, &prior).unwrap();
            let full = full_information_value(&inst, &prior).unwrap();
            assert!((report.dm_value - full).abs() < 1e-9);
        }
    }

    #[test]
    fn closed_form_value() {
        for (masses, c) in [
            ([0.3, 0.2, 0.5], 1.0),
            ([0.1, 0.5, 0.4], 1.0),
            ([0.4, 0.05, 0.55], 0.3),
        ] {
            let inst = credit(c);
            let report = solve_optimal_policy(&inst, &credit_prior(masses)).unwrap();
            let pm = masses[1];
            let q = (pm * (2.0 - c) / (c * (1.0 - pm))).min(1.0);
            assert!(
                (report.dm_value - (pm + q * (1.0 - pm))).abs() < 1e-9,
                "{masses:?}"
            );
        }
    }

    #[test]
    fn baselines() {
        let inst = credit(1.0);
        let prior = credit_prior([0.3, 0.2, 0.5]);
        assert!((full_information_value(&inst, &prior).unwrap() - 0.2).abs() < 1e-12);
        assert_eq!(no_information_value(&inst, &prior).unwrap(), (0, 0.0));
        let prior = credit_prior([0.1, 0.6, 0.3]);
        assert_eq!(no_information_value(&inst, &prior).unwrap(), (1, 1.0));
        // every action lands positive everywhere: nothing is worth paying for
        let all = credit_prior([0.0, 0.0, 1.0]);
        assert_eq!(full_information_value(&inst, &all).unwrap(), 0.0);
        assert_eq!(no_information_value(&inst, &all).unwrap(), (0, 0.0));
    }

    #[test]
    fn bic_checks() {
        let inst = credit(0.5);
        let prior = credit_prior([0.3, 0.2, 0.5]);
        let regions = enumerate_regions(&inst, &prior).unwrap();
        let honest = honest_policy(&inst, &regions).unwrap();
        assert!(verify_bic(&inst, &regions, &honest).unwrap() >= 0.0);

        // q at its bound makes the (pay, nothing) row bind
        let (pm, c) = (0.2, 0.5);
        let q = pm * (2.0 - c) / (c * (1.0 - pm));
        let policy = SignalingPolicy::new(
            vec!["01".parse().unwrap(), "11".parse().unwrap()],
            vec![vec![0.0, 1.0], vec![1.0 - q, q]],
        )
        .unwrap();
        let slack = verify_bic(&inst, &regions, &policy).unwrap();
        assert!(slack.abs() < 1e-12, "{slack}");

        // costly action that never changes the outcome
        let useless =
            Instance::with_null(1, vec![Action::new("noop", vec![0.0], 0.5, 1.0)], vec![0.0])
                .unwrap();
        let regions =
            enumerate_regions(&useless, &DiscretePrior::point_mass(vec![1.0, -1.0])).unwrap();
        let always =
            SignalingPolicy::new(vec![regions[0].key.clone()], vec![vec![0.0, 1.0]]).unwrap();
        assert!((verify_bic(&useless, &regions, &always).unwrap() + 0.5).abs() < 1e-12);
        assert!((expected_dm_utility(&useless, &regions, &always).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn missing_region_is_an_error() {
        let inst = credit(0.5);
        let regions = enumerate_regions(&inst, &credit_prior([0.3, 0.2, 0.5])).unwrap();
        let partial =
            SignalingPolicy::new(vec!["01".parse().unwrap()], vec![vec![0.0, 1.0]]).unwrap();
        assert!(verify_bic(&inst, &regions, &partial).is_err());
        assert!(expected_dm_utility(&inst, &regions, &partial).is_err());
    }

    #[test]
    fn zero_mass_regions_get_honest_rows() {
        let inst = credit(0.5);
        let report = solve_optimal_policy(&inst, &credit_prior([0.0, 1.0, 0.0])).unwrap();
        assert_eq!(report.policy.regions().len(), 2);
        let all_pos: RegionKey = "11".parse().unwrap();
        assert_eq!(report.policy.row(&all_pos).unwrap(), vec![1.0, 0.0]);
        assert!((report.dm_value - 1.0).abs() < 1e-9);
    }
}
