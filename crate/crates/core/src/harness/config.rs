//! JSON documents read and written by the command-line front end.
//!
//! A problem config looks like
//!
//! ```json
//! {
//!   "instance": {
//!     "dim": 1,
//!     "x0": [660.0],
//!     "actions": [{"label": "pay down debt", "delta_x": [40.0], "cost": 0.5, "dm_utility": 1.0}]
//!   },
//!   "prior": {"type": "gaussian", "mean": [1.0, -650.0], "std": [0.0, 50.0], "mc_samples": 2000},
//!   "theta_true": [1.0, -670.0],
//!   "seed": 7
//! }
//! ```
//!
//! `actions` lists the costly actions; the null action is added in front
//! unless the first entry already is one. A discrete prior is written
//! `{"type": "discrete", "support": [[...], ...], "probs": [...]}`.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::SolveReport;
use crate::harness::mc_discretize;
use crate::model::{Action, DiscretePrior, GaussianPrior, Instance, SignalingPolicy};
use crate::regions::RegionKey;

pub const DEFAULT_MC_SAMPLES: usize = 2000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceConfig {
    pub dim: usize,
    pub x0: Vec<f64>,
    pub actions: Vec<Action>,
}

impl InstanceConfig {
    pub fn build(&self) -> Result<Instance> {
        let starts_with_null = self.actions.first().is_some_and(Action::is_null);
        let result = if starts_with_null {
            Instance::new(self.dim, self.actions.clone(), self.x0.clone())
        } else {
            Instance::with_null(self.dim, self.actions.clone(), self.x0.clone())
        };
        result.map_err(|e| Error::Config(e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum PriorConfig {
    Discrete {
        support: Vec<Vec<f64>>,
        probs: Vec<f64>,
    },
    Gaussian {
        mean: Vec<f64>,
        std: Vec<f64>,
        #[serde(default = "default_mc_samples")]
        mc_samples: usize,
    },
}

fn default_mc_samples() -> usize {
    DEFAULT_MC_SAMPLES
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    pub instance: InstanceConfig,
    pub prior: PriorConfig,
    #[serde(default)]
    pub theta_true: Option<Vec<f64>>,
    pub seed: u64,
}

/// Prior in whichever form the caller needs.
#[derive(Debug, Clone, PartialEq)]
pub enum Prior {
    Discrete(DiscretePrior),
    Gaussian {
        prior: GaussianPrior,
        mc_samples: usize,
    },
}

impl ProblemConfig {
    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let text = fs::read_to_string(path.as_ref())?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn instance(&self) -> Result<Instance> {
        self.instance.build()
    }

    pub fn prior(&self) -> Result<Prior> {
        let prior = match &self.prior {
            PriorConfig::Discrete { support, probs } => Prior::Discrete(
                DiscretePrior::new(support.clone(), probs.clone()).map_err(config_err)?,
            ),
            PriorConfig::Gaussian {
                mean,
                std,
                mc_samples,
            } => {
                if *mc_samples == 0 {
                    return Err(Error::Config("mc_samples must be at least 1".into()));
                }
                Prior::Gaussian {
                    prior: GaussianPrior::new(mean.clone(), std.clone()).map_err(config_err)?,
                    mc_samples: *mc_samples,
                }
            }
        };
        Ok(prior)
    }

    /// Discrete prior for exact solving; Gaussian priors are sampled with `seed`.
    pub fn discrete_prior(&self) -> Result<DiscretePrior> {
        match self.prior()? {
            Prior::Discrete(p) => Ok(p),
            Prior::Gaussian { prior, mc_samples } => mc_discretize(&prior, mc_samples, self.seed),
        }
    }
}

fn config_err(e: Error) -> Error {
    Error::Config(e.to_string())
}

/// Policy as written to disk: region bitstring to recommendation probabilities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolicyFile {
    pub policy: BTreeMap<String, Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dm_value: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bic_slack: Option<f64>,
}

impl PolicyFile {
    pub fn from_policy(policy: &SignalingPolicy) -> Self {
        PolicyFile {
            policy: policy
                .regions()
                .iter()
                .zip(policy.rows())
                .map(|(k, row)| (k.to_string(), row.clone()))
                .collect(),
            dm_value: None,
            bic_slack: None,
        }
    }

    pub fn from_report(report: &SolveReport) -> Self {
        PolicyFile {
            dm_value: Some(report.dm_value),
            bic_slack: Some(report.bic_slack),
            ..PolicyFile::from_policy(&report.policy)
        }
    }

    pub fn to_policy(&self) -> Result<SignalingPolicy> {
        let mut keys = Vec::with_capacity(self.policy.len());
        let mut rows = Vec::with_capacity(self.policy.len());
        for (k, row) in &self.policy {
            let key: RegionKey = k.parse()?;
            if keys.contains(&key) {
                return Err(Error::invalid(format!("policy lists region {key} twice")));
            }
            keys.push(key);
            rows.push(row.clone());
        }
        SignalingPolicy::new(keys, rows)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let text = fs::read_to_string(path.as_ref())?;
        serde_json::from_str(&text).map_err(|e| Error::Config(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const CREDIT: &str = r#"{
        "instance": {"dim": 1, "x0": [660.0],
                     "actions": [{"label": "pay", "delta_x": [40.0], "cost": 0.5, "dm_utility": 1.0}]},
        "prior": {"type": "discrete", "support": [[1.0, -750.0], [1.0, -680.0]], "probs": [0.5, 0.5]},
        "seed": 1
    }"#;

    #[test]
    fn parses_and_prepends_null() {
        let cfg = ProblemConfig::from_json(CREDIT).unwrap();
        let inst = cfg.instance().unwrap();
        assert_eq!(inst.num_actions(), 2);
        assert!(inst.actions()[0].is_null());
        assert_eq!(cfg.discrete_prior().unwrap().len(), 2);
    }

    #[test]
    fn explicit_null_is_kept() {
        let text = CREDIT.replace(
            r#""actions": ["#,
            r#""actions": [{"label": "none", "delta_x": [0.0], "cost": 0.0, "dm_utility": 0.0}, "#,
        );
        let inst = ProblemConfig::from_json(&text).unwrap().instance().unwrap();
        assert_eq!(inst.num_actions(), 2);
    }

    #[test]
    fn gaussian_prior_is_sampled() {
        let text = r#"{
            "instance": {"dim": 1, "x0": [0.0], "actions": []},
            "prior": {"type": "gaussian", "mean": [1.0, 0.0], "std": [0.0, 1.0], "mc_samples": 25},
            "seed": 4
        }"#;
        let cfg = ProblemConfig::from_json(text).unwrap();
        let p = cfg.discrete_prior().unwrap();
        assert_eq!(p.len(), 25);
        assert_eq!(p, cfg.discrete_prior().unwrap());
    }

    #[test]
    fn bad_configs_are_config_errors() {
        assert!(matches!(
            ProblemConfig::from_json("{}"),
            Err(Error::Config(_))
        ));
        let no_seed = CREDIT.replace(r#""seed": 1"#, r#""other": 1"#);
        assert!(matches!(
            ProblemConfig::from_json(&no_seed),
            Err(Error::Config(_))
        ));
        let wrong_dim = CREDIT.replace(r#""x0": [660.0]"#, r#""x0": [660.0, 1.0]"#);
        let cfg = ProblemConfig::from_json(&wrong_dim).unwrap();
        assert!(matches!(cfg.instance(), Err(Error::Config(_))));
    }

    #[test]
    fn policy_file_round_trip() {
        let policy = SignalingPolicy::new(
            vec!["01".parse().unwrap(), "11".parse().unwrap()],
            vec![vec![0.0, 1.0], vec![0.75, 0.25]],
        )
        .unwrap();
        let file = PolicyFile::from_policy(&policy);
        let text = serde_json::to_string(&file).unwrap();
        assert_eq!(text, r#"{"policy":{"01":[0.0,1.0],"11":[0.75,0.25]}}"#);
        let back: PolicyFile = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_policy().unwrap(), policy);
    }
}
