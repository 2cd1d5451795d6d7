//! Credit-line sweep: the optimal policy against full and no disclosure
//! across cost / feature-change grids and three prior variances.
//!
//! ```bash
//! cargo run --release --example heloc_sweep -- [subjects] [out.csv]
//! ```

use std::fs::File;
use std::io::BufWriter;

use bic_signal::harness::sweep::{heloc_sweep_config, mean_gap, Subjects};
use bic_signal::harness::{cost_tables_fixture, run_sweep, write_csv};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let count: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(20);
    let out = args.next();

    let base = cost_tables_fixture()[0].expected;
    let subjects = Subjects::Synthetic {
        count,
        mean: 0.0,
        std: 1.0,
        seed: 1320,
    };
    let config = heloc_sweep_config(base, subjects, 7);
    let rows = run_sweep(&config)?;

    for &s2 in &config.sigma2 {
        let gap = mean_gap(&rows, s2).unwrap_or(f64::NAN);
        println!(
            "sigma2 = {s2:<4}  mean gap (signal - best baseline) = {gap:.4} over {count} subjects"
        );
    }
    if let Some(path) = out {
        write_csv(&rows, BufWriter::new(File::create(&path)?))?;
        println!("wrote {} rows to {path}", rows.len());
    }
    Ok(())
}
