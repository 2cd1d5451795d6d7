//! Bayesian-incentive-compatible action recommendations for subjects facing
//! a hidden linear decision rule.
//!
//! A decision maker knows the rule `theta`; subjects only hold a prior over
//! it. Instead of revealing the rule, the decision maker commits to a
//! policy that maps the rule's equivalence region to a recommended action,
//! chosen so that following the recommendation is in the subject's own
//! interest. [`exact`] solves for the best such policy under a discrete
//! prior, [`approx`] does so from samples, and [`oned`] gives closed forms
//! for the single-feature case.

pub mod approx;
pub mod costs;
pub mod error;
pub mod exact;
pub mod harness;
pub mod lp;
pub mod model;
pub mod normal;
pub mod oned;
pub mod regions;
pub mod sampling;

pub use error::{Error, Result};
pub use model::{Action, DiscretePrior, GaussianPrior, Instance, SignalingPolicy};
pub use regions::{Region, RegionKey};
