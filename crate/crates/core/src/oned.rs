//! Closed forms for a single feature and a single costly action.
//!
//! A subject with score `x0` is accepted when `x0 + theta >= 0`. One action
//! raises the score by `delta` at cost `c < 2`. Under a Gaussian prior on
//! `theta` the rule falls in one of three regions:
//!
//! * low (L): rejected even after acting,
//! * middle (M): rejected now, accepted after acting,
//! * high (H): accepted without acting.
//!
//! L and H are equivalent for the subject (both make acting pointless), so
//! the best policy recommends the action always in M and with probability
//! `q` otherwise, where `q` is the largest value keeping the recommendation
//! credible.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Action, DiscretePrior, Instance};
use crate::normal::std_normal_cdf;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OneDExample {
    pub x0: f64,
    pub delta: f64,
    pub cost: f64,
    pub prior_mean: f64,
    pub prior_std: f64,
}

impl OneDExample {
    pub fn new(x0: f64, delta: f64, cost: f64, prior_mean: f64, prior_std: f64) -> Result<Self> {
        let ex = OneDExample {
            x0,
            delta,
            cost,
            prior_mean,
            prior_std,
        };
        ex.validate()?;
        Ok(ex)
    }

    pub fn validate(&self) -> Result<()> {
        if ![
            self.x0,
            self.delta,
            self.cost,
            self.prior_mean,
            self.prior_std,
        ]
        .iter()
        .all(|v| v.is_finite())
        {
            return Err(Error::invalid(
                "one-feature example has non-finite parameters",
            ));
        }
        if self.delta <= 0.0 {
            return Err(Error::invalid(format!(
                "delta must be positive, got {}",
                self.delta
            )));
        }
        check_cost(self.cost)?;
        if self.prior_std <= 0.0 {
            return Err(Error::invalid(format!(
                "prior std must be positive, got {}",
                self.prior_std
            )));
        }
        Ok(())
    }
}

fn check_cost(cost: f64) -> Result<()> {
    if !(cost > 0.0 && cost < 2.0) {
        return Err(Error::invalid(format!(
            "action cost must lie in (0, 2), got {cost}"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionProbs {
    pub p_l: f64,
    pub p_m: f64,
    pub p_h: f64,
}

pub fn region_probs(ex: &OneDExample) -> Result<RegionProbs> {
    ex.validate()?;
    let s = ex.prior_std;
    let p_l = std_normal_cdf((-ex.x0 - ex.delta - ex.prior_mean) / s);
    let p_h = std_normal_cdf((ex.x0 + ex.prior_mean) / s);
    let p_m = (1.0 - p_l - p_h).max(0.0);
    Ok(RegionProbs { p_l, p_m, p_h })
}

/// Largest credible recommendation probability outside the middle region.
pub fn bic_q(p_m: f64, cost: f64) -> Result<f64> {
    check_cost(cost)?;
    if !(0.0..=1.0).contains(&p_m) {
        return Err(Error::invalid(format!(
            "middle-region mass must lie in [0, 1], got {p_m}"
        )));
    }
    if p_m == 1.0 {
        return Ok(1.0);
    }
    Ok((p_m * (2.0 - cost) / (cost * (1.0 - p_m))).clamp(0.0, 1.0))
}

/// Decision-maker value of the three disclosure strategies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PayoffRow {
    pub none: f64,
    pub signaling: f64,
    pub full: f64,
}

pub fn payoff_row(p_m: f64, cost: f64) -> Result<PayoffRow> {
    let q = bic_q(p_m, cost)?;
    Ok(PayoffRow {
        none: if 2.0 * p_m >= cost { 1.0 } else { 0.0 },
        signaling: p_m + q * (1.0 - p_m),
        full: p_m,
    })
}

/// Parameters where signaling earns `1 - eps` while full disclosure earns
/// less than `eps` and no disclosure earns nothing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnboundedGap {
    pub p_m: f64,
    pub cost: f64,
    pub predicted: PayoffRow,
}

pub fn unbounded_instance(eps: f64) -> Result<UnboundedGap> {
    if !(eps > 0.0 && eps < 0.5) {
        return Err(Error::invalid(format!(
            "eps must lie in (0, 0.5), got {eps}"
        )));
    }
    let p_m = eps * (1.0 - eps);
    Ok(UnboundedGap {
        p_m,
        cost: 2.0 * eps,
        predicted: PayoffRow {
            none: 0.0,
            signaling: 1.0 - eps,
            full: p_m,
        },
    })
}

/// Single-feature instance with a three-point prior carrying the given
/// region masses. Each support point sits `offset` inside its region
/// (the middle one at the midpoint); zero-mass regions are dropped.
pub fn discretize_probs(
    x0: f64,
    delta: f64,
    cost: f64,
    probs: RegionProbs,
    offset: f64,
) -> Result<(Instance, DiscretePrior)> {
    if !(delta > 0.0 && offset > 0.0) {
        return Err(Error::invalid("delta and offset must be positive"));
    }
    let instance = Instance::with_null(
        1,
        vec![Action::new("act", vec![delta], cost, 1.0)],
        vec![x0],
    )?;
    let candidates = [
        (-x0 - delta - offset, probs.p_l),
        (-x0 - delta / 2.0, probs.p_m),
        (-x0 + offset, probs.p_h),
    ];
    let (support, masses): (Vec<_>, Vec<_>) = candidates
        .into_iter()
        .filter(|&(_, p)| p > 0.0)
        .map(|(t, p)| (vec![1.0, t], p))
        .unzip();
    let total: f64 = masses.iter().sum();
    let masses = masses.into_iter().map(|p| p / total).collect();
    Ok((instance, DiscretePrior::new(support, masses)?))
}

pub fn discretize(ex: &OneDExample) -> Result<(Instance, DiscretePrior)> {
    let probs = region_probs(ex)?;
    discretize_probs(ex.x0, ex.delta, ex.cost, probs, ex.prior_std)
}
