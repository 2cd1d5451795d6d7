//! Single-feature credit example: closed-form payoffs of no disclosure,
//! optimal signaling and full disclosure, checked against the LP, and the
//! family of instances where signaling beats full disclosure by `1/eps`.
//!
//! ```bash
//! cargo run --example one_dimensional_gap
//! ```

use bic_signal::exact::solve_optimal_policy;
use bic_signal::oned::{self, OneDExample};

fn main() -> bic_signal::Result<()> {
    println!(
        "{:>5} {:>8} {:>8} {:>10} {:>8} {:>10}",
        "cost", "p_M", "none", "signaling", "full", "LP"
    );
    for cost in [0.3, 0.5, 0.8, 1.2, 1.6] {
        let ex = OneDExample::new(660.0, 40.0, cost, -650.0, 50.0)?;
        let probs = oned::region_probs(&ex)?;
        let row = oned::payoff_row(probs.p_m, cost)?;
        let (instance, prior) = oned::discretize(&ex)?;
        let lp = solve_optimal_policy(&instance, &prior)?.dm_value;
        println!(
            "{cost:>5} {:>8.4} {:>8.4} {:>10.4} {:>8.4} {lp:>10.4}",
            probs.p_m, row.none, row.signaling, row.full
        );
    }

    println!("\nunbounded gap:");
    for eps in [0.4, 0.1, 0.02] {
        let gap = oned::unbounded_instance(eps)?;
        let row = oned::payoff_row(gap.p_m, gap.cost)?;
        println!(
            "eps = {eps:<5} p_M = {:.4} c = {:.4}  signaling / full = {:.1}",
            gap.p_m,
            gap.cost,
            row.signaling / row.full
        );
    }
    Ok(())
}
