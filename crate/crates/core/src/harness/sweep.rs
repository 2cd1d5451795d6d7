//! Grid sweeps over action costs and feature changes.

use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::approx::{approximate_policy, verify_eps_bic};
use crate::error::{Error, Result};
use crate::exact::{self, full_information_value, no_information_value, verify_bic, BIC_TOL};
use crate::harness::fixtures::{heloc_fixture, synthetic_roster};
use crate::harness::mc_discretize;
use crate::model::{Action, DiscretePrior, GaussianPrior, Instance, SignalingPolicy};
use crate::regions::enumerate_regions;

pub const CSV_HEADER: &str =
    "sigma2,action_costs,action_deltas,method,dm_value,bic_slack,runtime_ms,seed,status";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Signal,
    Full,
    None,
    Approx,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Signal => "signal",
            Method::Full => "full",
            Method::None => "none",
            Method::Approx => "approx",
        }
    }
}

/// A costly action whose feature change is `delta * direction`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActionTemplate {
    pub label: String,
    pub direction: Vec<f64>,
    pub cost: f64,
    pub delta: f64,
    #[serde(default = "one")]
    pub dm_utility: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GridMode {
    /// Vary one action at a time, holding the others at their template values.
    #[default]
    PerAction,
    /// Every combination across all actions.
    Product,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Subjects {
    Single {
        x0: Vec<f64>,
    },
    Roster {
        x0s: Vec<Vec<f64>>,
    },
    Synthetic {
        count: usize,
        mean: f64,
        std: f64,
        seed: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ApproxParams {
    pub epsilon: f64,
    pub delta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub dim: usize,
    pub actions: Vec<ActionTemplate>,
    pub subjects: Subjects,
    /// Prior mean over the rule (coefficients then bias).
    pub prior_mean: Vec<f64>,
    /// Prior variances applied to every coefficient.
    pub sigma2: Vec<f64>,
    /// Standard deviation of the bias coordinate.
    #[serde(default)]
    pub bias_std: f64,
    pub cost_grid: Vec<f64>,
    pub delta_grid: Vec<f64>,
    #[serde(default)]
    pub mode: GridMode,
    pub mc_samples: usize,
    pub seed: u64,
    pub methods: Vec<Method>,
    #[serde(default)]
    pub approx: Option<ApproxParams>,
    /// Rule used to pick the approximate recommendation; defaults to the prior mean.
    #[serde(default)]
    pub theta_true: Option<Vec<f64>>,
    /// Record wall-clock time per row; off gives byte-identical reruns.
    #[serde(default = "yes")]
    pub timing: bool,
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub sigma2: f64,
    pub action_costs: Vec<f64>,
    pub action_deltas: Vec<f64>,
    pub method: Method,
    pub dm_value: f64,
    pub bic_slack: f64,
    pub runtime_ms: f64,
    pub seed: u64,
    pub status: String,
}

impl SweepRow {
    pub fn is_ok(&self) -> bool {
        self.status.starts_with("ok")
    }
}

/// One grid point: per-action cost and delta.
#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub costs: Vec<f64>,
    pub deltas: Vec<f64>,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Config(m.to_string()));
        if self.cost_grid.is_empty() || self.delta_grid.is_empty() {
            return bad("cost and delta grids must be nonempty");
        }
        if self.sigma2.is_empty() || self.sigma2.iter().any(|&s| !(s >= 0.0 && s.is_finite())) {
            return bad("sigma2 must be a nonempty list of nonnegative values");
        }
        if self.mc_samples == 0 {
            return bad("mc_samples must be at least 1");
        }
        if self.methods.is_empty() {
            return bad("no methods requested");
        }
        if self.actions.is_empty() {
            return bad("no actions in the template");
        }
        if self.actions.iter().any(|a| a.direction.len() != self.dim) {
            return bad("action direction length differs from dim");
        }
        if self.prior_mean.len() != self.dim + 1 {
            return bad("prior_mean must have dim + 1 entries");
        }
        if self.methods.contains(&Method::Approx) && self.approx.is_none() {
            return bad("approx method requested without approx parameters");
        }
        if let Some(t) = &self.theta_true {
            if t.len() != self.dim + 1 {
                return bad("theta_true must have dim + 1 entries");
            }
        }
        let subjects = self.subject_list();
        if subjects.is_empty() || subjects.iter().any(|x| x.len() != self.dim) {
            return bad("subjects must be nonempty with dim features each");
        }
        Ok(())
    }

    pub fn subject_list(&self) -> Vec<Vec<f64>> {
        match &self.subjects {
            Subjects::Single { x0 } => vec![x0.clone()],
            Subjects::Roster { x0s } => x0s.clone(),
            Subjects::Synthetic {
                count,
                mean,
                std,
                seed,
            } => synthetic_roster(*count, self.dim, *mean, *std, *seed),
        }
    }

    pub fn cells(&self) -> Vec<Cell> {
        let base = Cell {
            costs: self.actions.iter().map(|a| a.cost).collect(),
            deltas: self.actions.iter().map(|a| a.delta).collect(),
        };
        let pairs: Vec<(f64, f64)> = self
            .cost_grid
            .iter()
            .flat_map(|&c| self.delta_grid.iter().map(move |&d| (c, d)))
            .collect();
        match self.mode {
            GridMode::PerAction => (0..self.actions.len())
                .flat_map(|i| {
                    let base = base.clone();
                    pairs.iter().map(move |&(c, d)| {
                        let mut cell = base.clone();
                        cell.costs[i] = c;
                        cell.deltas[i] = d;
                        cell
                    })
                })
                .collect(),
            GridMode::Product => {
                let mut cells = vec![Cell {
                    costs: Vec::new(),
                    deltas: Vec::new(),
                }];
                for _ in &self.actions {
                    cells = cells
                        .into_iter()
                        .flat_map(|cell| {
                            pairs.iter().map(move |&(c, d)| {
                                let mut next = cell.clone();
                                next.costs.push(c);
                                next.deltas.push(d);
                                next
                            })
                        })
                        .collect();
                }
                cells
            }
        }
    }

    fn instance(&self, cell: &Cell, x0: &[f64]) -> Result<Instance> {
        let actions = self
            .actions
            .iter()
            .zip(&cell.costs)
            .zip(&cell.deltas)
            .map(|((t, &c), &d)| {
                Action::new(
                    t.label.clone(),
                    t.direction.iter().map(|v| v * d).collect(),
                    c,
                    t.dm_utility,
                )
            })
            .collect();
        Instance::with_null(self.dim, actions, x0.to_vec())
    }

    fn gaussian(&self, sigma2: f64) -> Result<GaussianPrior> {
        let mut std = vec![sigma2.sqrt(); self.dim];
        std.push(self.bias_std);
        GaussianPrior::new(self.prior_mean.clone(), std)
    }
}

/// Credit-line sweep: the four recourse actions at their base costs with
/// the grid varied one action at a time.
pub fn heloc_sweep_config(base_costs: [f64; 4], subjects: Subjects, seed: u64) -> SweepConfig {
    let fixture = heloc_fixture();
    let actions = fixture
        .labels
        .iter()
        .zip(&fixture.directions)
        .zip(base_costs)
        .map(|((label, dir), cost)| ActionTemplate {
            label: label.clone(),
            direction: dir.clone(),
            cost,
            delta: 0.5,
            dm_utility: 1.0,
        })
        .collect();
    SweepConfig {
        dim: fixture.dim,
        actions,
        subjects,
        prior_mean: fixture.theta_true.clone(),
        sigma2: vec![0.1, 0.4, 1.0],
        bias_std: 0.0,
        cost_grid: vec![0.0, 0.25, 0.5],
        delta_grid: vec![0.0, 0.5, 1.0],
        mode: GridMode::PerAction,
        mc_samples: 2000,
        seed,
        methods: vec![Method::Signal, Method::Full, Method::None],
        approx: None,
        theta_true: None,
        timing: true,
    }
}

struct MethodResult {
    dm_value: f64,
    bic_slack: f64,
    note: String,
}

fn constant_policy(
    instance: &Instance,
    prior: &DiscretePrior,
    action: usize,
) -> Result<SignalingPolicy> {
    let regions = enumerate_regions(instance, prior)?;
    let mut row = vec![0.0; instance.num_actions()];
    row[action] = 1.0;
    SignalingPolicy::new(
        regions.iter().map(|r| r.key.clone()).collect(),
        vec![row; regions.len()],
    )
}

fn run_method(
    config: &SweepConfig,
    method: Method,
    instance: &Instance,
    prior: &DiscretePrior,
    gaussian: &GaussianPrior,
) -> Result<MethodResult> {
    let regions = enumerate_regions(instance, prior)?;
    match method {
        Method::Signal => {
            let report = exact::solve_over_regions(instance, &regions)?;
            Ok(MethodResult {
                dm_value: report.dm_value,
                bic_slack: report.bic_slack,
                note: String::new(),
            })
        }
        Method::Full => {
            let honest = exact::honest_policy(instance, &regions)?;
            Ok(MethodResult {
                dm_value: full_information_value(instance, prior)?,
                bic_slack: verify_bic(instance, &regions, &honest)?,
                note: String::new(),
            })
        }
        Method::None => {
            let (action, value) = no_information_value(instance, prior)?;
            let policy = constant_policy(instance, prior, action)?;
            Ok(MethodResult {
                dm_value: value,
                bic_slack: verify_bic(instance, &regions, &policy)?,
                note: String::new(),
            })
        }
        Method::Approx => {
            let params = config
                .approx
                .ok_or_else(|| Error::Config("approx parameters missing".into()))?;
            let theta = config.theta_true.as_ref().unwrap_or(&config.prior_mean);
            let report = approximate_policy(
                instance,
                gaussian,
                theta,
                params.epsilon,
                params.delta,
                config.seed,
            )?;
            let slack = verify_eps_bic(instance, &report, &report.full_policy)?;
            Ok(MethodResult {
                dm_value: report.lp_value,
                bic_slack: slack,
                note: format!(
                    ";eps={};delta={};K={}",
                    params.epsilon, params.delta, report.k
                ),
            })
        }
    }
}

/// Runs every (sigma2, cell, method) combination. Values are summed over
/// subjects; the reported slack is the worst over subjects. Cells run in
/// parallel and rows come back in deterministic order.
pub fn run_sweep(config: &SweepConfig) -> Result<Vec<SweepRow>> {
    config.validate()?;
    let subjects = config.subject_list();
    let cells = config.cells();
    let mut methods = config.methods.clone();
    methods.sort();
    methods.dedup();

    let mut rows = Vec::new();
    for &sigma2 in &config.sigma2 {
        let gaussian = config.gaussian(sigma2)?;
        // shared across cells and subjects; scaled copies of one stream across sigma2
        let prior = mc_discretize(&gaussian, config.mc_samples, config.seed)?;
        let cell_rows: Vec<Vec<SweepRow>> = cells
            .par_iter()
            .map(|cell| run_cell(config, cell, sigma2, &methods, &subjects, &prior, &gaussian))
            .collect();
        for block in cell_rows {
            check_dominance(&block)?;
            rows.extend(block);
        }
    }
    Ok(rows)
}

fn run_cell(
    config: &SweepConfig,
    cell: &Cell,
    sigma2: f64,
    methods: &[Method],
    subjects: &[Vec<f64>],
    prior: &DiscretePrior,
    gaussian: &GaussianPrior,
) -> Vec<SweepRow> {
    methods
        .iter()
        .map(|&method| {
            let start = Instant::now();
            let mut total = 0.0;
            let mut slack = f64::INFINITY;
            let mut note = String::new();
            let mut failure = None;
            for x0 in subjects {
                let outcome = config
                    .instance(cell, x0)
                    .and_then(|inst| run_method(config, method, &inst, prior, gaussian));
                match outcome {
                    Ok(r) => {
                        total += r.dm_value;
                        slack = slack.min(r.bic_slack);
                        note = r.note;
                    }
                    Err(e) => {
                        failure = Some(e.to_string());
                        break;
                    }
                }
            }
            let runtime_ms = if config.timing {
                start.elapsed().as_secs_f64() * 1e3
            } else {
                0.0
            };
            let (dm_value, bic_slack, status) = match failure {
                None => (total, slack, format!("ok{note}")),
                Some(msg) => (f64::NAN, f64::NAN, format!("error: {msg}")),
            };
            SweepRow {
                sigma2,
                action_costs: cell.costs.clone(),
                action_deltas: cell.deltas.clone(),
                method,
                dm_value,
                bic_slack,
                runtime_ms,
                seed: config.seed,
                status,
            }
        })
        .collect()
}

/// Signaling must match or beat both disclosure baselines in a cell.
pub fn check_dominance(cell_rows: &[SweepRow]) -> Result<()> {
    let value = |m: Method| {
        cell_rows
            .iter()
            .find(|r| r.method == m && r.is_ok())
            .map(|r| r.dm_value)
    };
    let Some(signal) = value(Method::Signal) else {
        return Ok(());
    };
    for baseline in [Method::Full, Method::None] {
        if let Some(v) = value(baseline) {
            if signal < v - BIC_TOL {
                let r = &cell_rows[0];
                return Err(Error::DominanceViolation(format!(
                    "sigma2={} costs={:?} deltas={:?}: signal {signal} < {} {v}",
                    r.sigma2,
                    r.action_costs,
                    r.action_deltas,
                    baseline.as_str()
                )));
            }
        }
    }
    Ok(())
}

fn join(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(";")
}

/// Writes rows as CSV with the fixed header.
pub fn write_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(CSV_HEADER.split(','))?;
    for r in rows {
        writer.write_record([
            r.sigma2.to_string(),
            join(&r.action_costs),
            join(&r.action_deltas),
            r.method.as_str().to_string(),
            r.dm_value.to_string(),
            r.bic_slack.to_string(),
            format!("{:.3}", r.runtime_ms),
            r.seed.to_string(),
            r.status.clone(),
        ])?;
    }
    writer.flush()?;
    Ok(())
}

/// Mean of `signal - max(full, none)` over the cells of one variance.
pub fn mean_gap(rows: &[SweepRow], sigma2: f64) -> Option<f64> {
    let selected: Vec<&SweepRow> = rows
        .iter()
        .filter(|r| r.sigma2 == sigma2 && r.is_ok())
        .collect();
    let mut gaps = Vec::new();
    for r in selected.iter().filter(|r| r.method == Method::Signal) {
        let baseline = selected
            .iter()
            .filter(|o| {
                matches!(o.method, Method::Full | Method::None)
                    && o.action_costs == r.action_costs
                    && o.action_deltas == r.action_deltas
            })
            .map(|o| o.dm_value)
            .fold(f64::NEG_INFINITY, f64::max);
        if baseline.is_finite() {
            gaps.push(r.dm_value - baseline);
        }
    }
    (!gaps.is_empty()).then(|| gaps.iter().sum::<f64>() / gaps.len() as f64)
}
