//! Exit criteria. Each test prints one `[PASS]` / `[FAIL]` line.
//!
//! Run with `cargo test --release -p bic-signal --test acceptance -- --nocapture`.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use bic_signal::approx::{
    approximate_policy, large_or_honest_policy, sample_count, verify_eps_bic,
};
use bic_signal::costs::{fit_bradley_terry, DEFAULT_MAX_ITER, DEFAULT_TOL};
use bic_signal::exact::{
    expected_dm_utility, full_information_value, no_information_value, solve_optimal_policy,
    solve_over_regions, verify_bic, BIC_TOL,
};
use bic_signal::harness::sweep::{heloc_sweep_config, mean_gap, Method, Subjects};
use bic_signal::harness::{cost_tables_fixture, run_sweep};
use bic_signal::lp::{solve, LpStatus};
use bic_signal::oned::{self, OneDExample, RegionProbs};
use bic_signal::regions::{enumerate_regions, region_key, theoretical_region_count};
use bic_signal::{Action, DiscretePrior, Instance};
use rand::Rng;

fn report(id: &str, ok: bool, detail: String) {
    println!(
        "[{}] criterion {id}: {detail}",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok, "criterion {id} failed: {detail}");
}

fn within(elapsed: Duration, limit: Duration) -> bool {
    elapsed < limit
}

#[test]
fn criterion_01_analytic_oracle() {
    let start = Instant::now();
    let mut rng = common::rng(101);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let x0 = rng.random_range(300.0..850.0);
        let delta = rng.random_range(5.0..120.0);
        let cost = rng.random_range(0.05..1.95);
        let std = rng.random_range(5.0..100.0);
        let mean = -x0 - delta / 2.0 + rng.random_range(-2.0..2.0) * std;
        let ex = OneDExample::new(x0, delta, cost, mean, std).unwrap();
        let (instance, prior) = oned::discretize(&ex).unwrap();
        let value = solve_optimal_policy(&instance, &prior).unwrap().dm_value;
        let p_m = oned::region_probs(&ex).unwrap().p_m;
        let q = oned::bic_q(p_m, cost).unwrap();
        worst = worst.max((value - (p_m + q * (1.0 - p_m))).abs());
    }
    let elapsed = start.elapsed();
    report(
        "1 (analytic oracle)",
        worst <= 1e-8 && within(elapsed, Duration::from_secs(5)),
        format!("200 examples, max |LP - closed form| = {worst:.2e}, {elapsed:.2?}"),
    );
}

#[test]
fn criterion_02_unbounded_gap() {
    let gap = oned::unbounded_instance(0.1).unwrap();
    let row = oned::payoff_row(gap.p_m, gap.cost).unwrap();
    // 0.09 and 0.9 are not representable; compare at machine precision
    let table_ok =
        row.none == 0.0 && (row.signaling - 0.9).abs() <= 1e-15 && (row.full - 0.09).abs() <= 1e-15;

    let half = (1.0 - gap.p_m) / 2.0;
    let probs = RegionProbs {
        p_l: half,
        p_m: gap.p_m,
        p_h: half,
    };
    let (instance, prior) = oned::discretize_probs(660.0, 40.0, gap.cost, probs, 50.0).unwrap();
    let signal = solve_optimal_policy(&instance, &prior).unwrap().dm_value;
    let full = full_information_value(&instance, &prior).unwrap();
    let (_, none) = no_information_value(&instance, &prior).unwrap();
    let lp_ok = none.abs() <= 1e-8 && (signal - 0.9).abs() <= 1e-8 && (full - 0.09).abs() <= 1e-8;
    report(
        "2 (unbounded gap, eps = 0.1)",
        table_ok && lp_ok,
        format!(
            "closed form ({}, {}, {}), LP ({none:.10}, {signal:.10}, {full:.10})",
            row.none, row.signaling, row.full
        ),
    );
}

struct RandomSweep {
    violations: usize,
    worst_margin: f64,
    worst_slack: f64,
    elapsed: Duration,
}

fn random_dominance_sweep() -> RandomSweep {
    let start = Instant::now();
    let mut rng = common::rng(303);
    let mut violations = 0;
    let mut worst_margin = f64::INFINITY;
    let mut worst_slack = f64::INFINITY;
    for _ in 0..500 {
        let (instance, prior) = common::random_instance(&mut rng);
        let report = solve_optimal_policy(&instance, &prior).unwrap();
        let full = full_information_value(&instance, &prior).unwrap();
        let (_, none) = no_information_value(&instance, &prior).unwrap();
        let margin = report.dm_value - full.max(none);
        if margin < -1e-7 {
            violations += 1;
        }
        worst_margin = worst_margin.min(margin);
        worst_slack = worst_slack.min(report.bic_slack);
    }
    RandomSweep {
        violations,
        worst_margin,
        worst_slack,
        elapsed: start.elapsed(),
    }
}

#[test]
fn criterion_03_dominance() {
    let s = random_dominance_sweep();
    report(
        "3 (signaling dominates both baselines)",
        s.violations == 0 && within(s.elapsed, Duration::from_secs(30)),
        format!(
            "500 instances, {} violations, min margin {:.2e}, {:.2?}",
            s.violations, s.worst_margin, s.elapsed
        ),
    );
}

#[test]
fn criterion_04_bic_verification() {
    let s = random_dominance_sweep();
    report(
        "4 (exact policies are BIC)",
        s.worst_slack >= -BIC_TOL,
        format!("500 instances, min slack {:.2e}", s.worst_slack),
    );
}

/// One feature, two costly actions; the prior puts mass in three canonical regions.
fn three_region_instance() -> (Instance, DiscretePrior) {
    let instance = Instance::with_null(
        1,
        vec![
            Action::new("small step", vec![1.0], 0.6, 0.5),
            Action::new("big step", vec![2.0], 1.2, 1.0),
        ],
        vec![0.0],
    )
    .unwrap();
    let prior = DiscretePrior::new(
        vec![
            vec![1.0, -2.5],
            vec![1.0, -1.5],
            vec![1.0, -0.5],
            vec![1.0, 0.5],
        ],
        vec![0.25, 0.25, 0.2, 0.3],
    )
    .unwrap();
    (instance, prior)
}

#[test]
fn criterion_05_sampling_guarantee() {
    let start = Instant::now();
    let (instance, prior) = three_region_instance();
    let regions = enumerate_regions(&instance, &prior).unwrap();
    assert_eq!(regions.len(), 3);
    let opt = solve_optimal_policy(&instance, &prior).unwrap().dm_value;
    let (eps, delta) = (0.2, 0.1);
    let theta = vec![1.0, -1.5];
    let mut good = 0;
    let mut worst_bic = f64::INFINITY;
    let mut k = 0;
    for seed in 0..50 {
        let r = approximate_policy(&instance, &prior, &theta, eps, delta, seed).unwrap();
        k = r.k;
        if r.lp_value >= opt - eps {
            good += 1;
        }
        worst_bic = worst_bic.min(verify_eps_bic(&instance, &r, &r.full_policy).unwrap());
    }
    let elapsed = start.elapsed();
    report(
        "5 (sampling algorithm, eps = 0.2, delta = 0.1)",
        good >= 45 && worst_bic >= -eps - 1e-7 && within(elapsed, Duration::from_secs(120)),
        format!("OPT {opt:.4}, K = {k}, {good}/50 runs within eps, min eps-BIC slack {worst_bic:.4}, {elapsed:.2?}"),
    );
}

#[test]
fn criterion_06_sample_count() {
    let a = sample_count(0.1, 0.05, 2).unwrap();
    let b = sample_count(0.1, 0.05, 5).unwrap();
    report(
        "6 (sample count)",
        a == 1060 && b == 1390,
        format!("K(0.1, 0.05, 2) = {a}, K(0.1, 0.05, 5) = {b}"),
    );
}

#[test]
fn criterion_07_bradley_terry() {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut ordered = true;
    for table in cost_tables_fixture() {
        let fitted = fit_bradley_terry(&table.comparisons, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
        for (f, e) in fitted.iter().zip(&table.expected) {
            worst = worst.max((f - e).abs());
        }
        ordered &= table
            .ordering
            .windows(2)
            .all(|w| fitted[w[0]] > fitted[w[1]]);
    }
    let elapsed = start.elapsed();
    report(
        "7 (Bradley-Terry cost tables)",
        worst <= 0.02 && ordered && within(elapsed, Duration::from_secs(1)),
        format!(
            "max entry error {worst:.4}, orderings {}, {elapsed:.2?}",
            if ordered { "hold" } else { "broken" }
        ),
    );
}

#[test]
fn criterion_08a_two_threshold_region_keys() {
    // two features, one action each; acceptance thresholds at 1/2 on both axes
    let instance = Instance::with_null(
        2,
        vec![
            Action::new("a1", vec![1.0, 0.0], 0.2, 1.0),
            Action::new("a2", vec![0.0, 1.0], 0.2, 1.0),
        ],
        vec![0.0, 0.0],
    )
    .unwrap();
    let mut keys = BTreeSet::new();
    for i in 0..200 {
        for j in 0..200 {
            let t1 = 2.0 * (i as f64 + 0.5) / 200.0;
            let t2 = (j as f64 + 0.5) / 200.0;
            keys.insert(region_key(&instance, &[t1, t2, -0.5]).unwrap());
        }
    }
    let found: Vec<String> = keys.iter().map(|k| k.to_string()).collect();
    report(
        "8a (two-threshold instance has 3 canonical keys)",
        keys.len() == 3,
        format!("dense grid gives {} keys {found:?}", keys.len()),
    );
}

#[test]
fn criterion_08b_theoretical_count() {
    let n = theoretical_region_count(&[2, 2]).unwrap();
    report(
        "8b (theoretical count [2, 2])",
        n == 3,
        format!("count = {n}"),
    );
}

#[test]
fn criterion_09_large_or_honest() {
    let mut rng = common::rng(909);
    let mut worst_slack = f64::INFINITY;
    let mut worst_excess = f64::NEG_INFINITY;
    let mut changed = 0;
    for _ in 0..100 {
        let (instance, prior) = common::random_instance(&mut rng);
        let regions = enumerate_regions(&instance, &prior).unwrap();
        let opt = solve_over_regions(&instance, &regions).unwrap();
        let eps = rng.random_range(0.05..1.0);
        let out = large_or_honest_policy(&instance, &regions, &opt.policy, eps).unwrap();
        if out != opt.policy {
            changed += 1;
        }
        worst_slack = worst_slack.min(verify_bic(&instance, &regions, &out).unwrap());
        let loss = opt.dm_value - expected_dm_utility(&instance, &regions, &out).unwrap();
        worst_excess = worst_excess.max(loss - eps / 2.0);
    }
    report(
        "9 (large-or-honest construction)",
        worst_slack >= -BIC_TOL && worst_excess <= 1e-7,
        format!("100 policies ({changed} modified), min slack {worst_slack:.2e}, max loss - eps/2 = {worst_excess:.4}"),
    );
}

#[test]
fn criterion_10_heloc_sweep() {
    let start = Instant::now();
    let subjects = Subjects::Synthetic {
        count: 20,
        mean: 0.0,
        std: 1.0,
        seed: 1320,
    };
    let config = heloc_sweep_config(cost_tables_fixture()[0].expected, subjects, 7);
    assert_eq!(config.mc_samples, 2000);
    let rows = run_sweep(&config).expect("sweep must not report a dominance violation");
    let expected_rows = config.cells().len() * config.methods.len() * config.sigma2.len();
    let all_ok = rows.len() == expected_rows && rows.iter().all(|r| r.is_ok());

    let mut dominated = true;
    for r in rows.iter().filter(|r| r.method == Method::Signal) {
        let best = rows
            .iter()
            .filter(|o| {
                o.method != Method::Signal
                    && o.sigma2 == r.sigma2
                    && o.action_costs == r.action_costs
                    && o.action_deltas == r.action_deltas
            })
            .map(|o| o.dm_value)
            .fold(f64::NEG_INFINITY, f64::max);
        dominated &= r.dm_value >= best - 1e-7;
    }
    let gaps: Vec<f64> = config
        .sigma2
        .iter()
        .map(|&s| mean_gap(&rows, s).unwrap())
        .collect();
    let monotone = gaps.windows(2).all(|w| w[1] >= w[0]);
    let elapsed = start.elapsed();
    report(
        "10 (credit-line sweep)",
        all_ok && dominated && monotone && within(elapsed, Duration::from_secs(600)),
        format!(
            "{} rows, dominance {}, mean gaps {gaps:.4?} at sigma2 {:?}, {elapsed:.2?}",
            rows.len(),
            if dominated { "holds" } else { "violated" },
            config.sigma2
        ),
    );
}

#[test]
fn criterion_11_lp_oracle() {
    let mut rng = common::rng(1111);
    let mut worst = 0.0f64;
    let mut mismatched = 0;
    let mut infeasible = 0;
    for _ in 0..300 {
        let problem = common::random_lp(&mut rng);
        let sol = solve(&problem).unwrap();
        match (sol.status, common::vertex_enumeration(&problem)) {
            (LpStatus::Optimal, Some(v)) => worst = worst.max((sol.value - v).abs()),
            (LpStatus::Infeasible, None) => infeasible += 1,
            _ => mismatched += 1,
        }
    }
    report(
        "11 (LP vs vertex enumeration)",
        mismatched == 0 && worst <= 1e-6,
        format!("300 LPs ({infeasible} infeasible), {mismatched} status mismatches, max gap {worst:.2e}"),
    );
}
