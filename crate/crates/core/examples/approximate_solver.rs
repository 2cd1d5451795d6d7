//! Sampling-based recommendation for one subject: how the LP value and the
//! number of prior samples change with the accuracy target.
//!
//! ```bash
//! cargo run --release --example approximate_solver
//! ```

use bic_signal::approx::{approximate_policy, is_eps_bic};
use bic_signal::exact::solve_optimal_policy;
use bic_signal::harness::ProblemConfig;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = ProblemConfig::from_path(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/data/three_regions.json"
    ))?;
    let instance = cfg.instance()?;
    let prior = cfg.discrete_prior()?;
    let theta = cfg.theta_true.clone().expect("config has theta_true");
    let opt = solve_optimal_policy(&instance, &prior)?.dm_value;
    println!("exact optimum {opt:.4}");

    for eps in [0.4, 0.2, 0.1, 0.05] {
        let r = approximate_policy(&instance, &prior, &theta, eps, 0.1, cfg.seed)?;
        let dist: Vec<String> = r
            .recommendation_dist
            .iter()
            .map(|p| format!("{p:.3}"))
            .collect();
        println!(
            "eps = {eps:<5} K = {:<6} LP value {:.4}  eps-BIC {}  region {}  recommend [{}]",
            r.k,
            r.lp_value,
            is_eps_bic(&instance, &r)?,
            r.true_region,
            dist.join(", ")
        );
    }
    Ok(())
}
