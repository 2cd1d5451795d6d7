//! Optimal incentive-compatible policy for a problem config, next to the
//! two disclosure baselines.
//!
//! ```bash
//! cargo run --example exact_solver -- crates/core/examples/data/three_regions.json
//! ```

use bic_signal::exact::{full_information_value, no_information_value, solve_optimal_policy};
use bic_signal::harness::ProblemConfig;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args().nth(1).unwrap_or_else(|| {
        concat!(
            env!("CARGO_MANIFEST_DIR"),
            "/examples/data/three_regions.json"
        )
        .into()
    });
    let cfg = ProblemConfig::from_path(&path)?;
    let instance = cfg.instance()?;
    let prior = cfg.discrete_prior()?;

    let report = solve_optimal_policy(&instance, &prior)?;
    let labels: Vec<&str> = instance
        .actions()
        .iter()
        .map(|a| a.label.as_str())
        .collect();
    println!("actions: {labels:?}");
    for ((key, row), mass) in report
        .policy
        .regions()
        .iter()
        .zip(report.policy.rows())
        .zip(&report.region_masses)
    {
        let row: Vec<String> = row.iter().map(|p| format!("{p:.3}")).collect();
        println!("region {key} (mass {mass:.3}): [{}]", row.join(", "));
    }
    let (none_action, none) = no_information_value(&instance, &prior)?;
    println!(
        "signaling value   {:.4} (BIC slack {:.1e})",
        report.dm_value, report.bic_slack
    );
    println!(
        "full disclosure   {:.4}",
        full_information_value(&instance, &prior)?
    );
    println!(
        "no disclosure     {none:.4} (subject plays {})",
        labels[none_action]
    );
    Ok(())
}
