//! Equivalence regions: exact keys on a small two-feature instance, and the
//! sampled region count against the product formula as actions grow
//! (coefficients drawn nonnegative, so every action helps).
//!
//! ```bash
//! cargo run --release --example region_count
//! ```

use bic_signal::regions::{empirical_region_count, enumerate_regions, theoretical_region_count};
use bic_signal::sampling::UniformBox;
use bic_signal::{Action, DiscretePrior, Instance};

fn main() -> bic_signal::Result<()> {
    let instance = Instance::with_null(
        2,
        vec![
            Action::new("raise feature 1", vec![1.0, 0.0], 0.2, 1.0),
            Action::new("raise feature 2", vec![0.0, 1.0], 0.2, 1.0),
        ],
        vec![0.0, 0.0],
    )?;
    let support: Vec<Vec<f64>> = [(0.25, 0.25), (1.5, 0.25), (0.25, 0.75), (1.5, 0.75)]
        .iter()
        .map(|&(a, b)| vec![a, b, -0.5])
        .collect();
    let prior = DiscretePrior::uniform(support)?;
    for r in enumerate_regions(&instance, &prior)? {
        println!("key {} mass {:.2} members {:?}", r.key, r.mass, r.members);
    }

    println!("\nactions per feature | product formula | sampled regions");
    for per_feature in 1..=4u64 {
        let mut actions = Vec::new();
        for f in 0..2 {
            for k in 1..=per_feature {
                let mut delta = vec![0.0; 2];
                delta[f] = k as f64;
                actions.push(Action::new(
                    format!("f{f} +{k}"),
                    delta,
                    0.1 * k as f64,
                    1.0,
                ));
            }
        }
        let inst = Instance::with_null(2, actions, vec![0.0, 0.0])?;
        let sampler = UniformBox {
            lo: vec![0.0, 0.0, -3.0],
            hi: vec![1.0, 1.0, 3.0],
        };
        let bound = theoretical_region_count(&[per_feature + 1, per_feature + 1])?;
        let seen = empirical_region_count(&inst, &sampler, 20_000, 9)?;
        println!("{per_feature:>19} | {bound:>15} | {seen:>15}");
    }
    Ok(())
}
