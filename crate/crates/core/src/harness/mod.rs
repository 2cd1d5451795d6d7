//! Configuration, fixtures, Monte Carlo discretization and experiment sweeps.

pub mod config;
pub mod fixtures;
pub mod sweep;

use crate::error::{Error, Result};
use crate::model::{DiscretePrior, GaussianPrior, Instance};
use crate::sampling::{seeded_rng, ThetaSampler};

pub use config::{PolicyFile, Prior, ProblemConfig};
pub use fixtures::{cost_tables_fixture, heloc_fixture, synthetic_roster, CostTable, HelocFixture};
pub use sweep::{heloc_sweep_config, run_sweep, write_csv, Method, SweepConfig, SweepRow};

/// `n` seeded draws from `prior`, each with weight `1/n`.
pub fn mc_discretize(prior: &GaussianPrior, n: usize, seed: u64) -> Result<DiscretePrior> {
    if n == 0 {
        return Err(Error::invalid("need at least one sample"));
    }
    let mut rng = seeded_rng(seed);
    let support = (0..n).map(|_| prior.sample(&mut rng)).collect();
    DiscretePrior::uniform(support)
}

/// Rescales decision-maker utilities into `[0, 1]` by dividing by the largest one.
pub fn normalize_dm_utilities(instance: &Instance) -> Result<Instance> {
    let actions = instance.actions();
    if actions.iter().any(|a| a.dm_utility < 0.0) {
        return Err(Error::invalid(
            "cannot normalize negative decision-maker utilities",
        ));
    }
    let top = actions.iter().map(|a| a.dm_utility).fold(0.0, f64::max);
    if top == 0.0 {
        return Ok(instance.clone());
    }
    let scaled = actions
        .iter()
        .map(|a| {
            let mut a = a.clone();
            a.dm_utility /= top;
            a
        })
        .collect();
    Instance::new(instance.dim(), scaled, instance.x0().to_vec())
}
