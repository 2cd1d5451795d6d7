//! Bradley-Terry action costs from pairwise difficulty judgments, for the
//! four bundled comparison tables.
//!
//! ```bash
//! cargo run --example fit_costs
//! ```

use bic_signal::costs::{fit_bradley_terry, DEFAULT_MAX_ITER, DEFAULT_TOL};
use bic_signal::harness::{cost_tables_fixture, heloc_fixture};

fn main() -> bic_signal::Result<()> {
    let labels = heloc_fixture().labels;
    for table in cost_tables_fixture() {
        let costs = fit_bradley_terry(&table.comparisons, DEFAULT_TOL, DEFAULT_MAX_ITER)?;
        println!("table {}", table.name);
        for ((label, c), e) in labels.iter().zip(&costs).zip(&table.expected) {
            println!("  {label:<40} {c:.4}  (reference {e:.4})");
        }
    }
    Ok(())
}
