use std::fs::File;
use std::io::{self, BufWriter};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use bic_signal::approx::{approximate_policy, is_eps_bic};
use bic_signal::costs::{fit_bradley_terry, PairwiseComparisons, DEFAULT_MAX_ITER, DEFAULT_TOL};
use bic_signal::exact::{
    expected_dm_utility, full_information_value, no_information_value, solve_optimal_policy,
    verify_bic, BIC_TOL,
};
use bic_signal::harness::{run_sweep, write_csv, PolicyFile, Prior, ProblemConfig, SweepConfig};
use bic_signal::oned::{self, OneDExample};
use bic_signal::regions::enumerate_regions;
use bic_signal::{Error, Result};

#[derive(Parser)]
#[command(
    name = "bic-signal",
    version,
    about = "Incentive-compatible action recommendation solver"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Optimal policy for a problem config, with both disclosure baselines.
    SolveExact { config: PathBuf },
    /// Sampling-based policy for the config's `theta_true`.
    SolveApprox {
        config: PathBuf,
        #[arg(long)]
        epsilon: f64,
        #[arg(long)]
        delta: f64,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Closed-form single-feature example.
    Oned {
        #[arg(long)]
        x0: f64,
        #[arg(long)]
        delta: f64,
        #[arg(long)]
        cost: f64,
        #[arg(long, allow_hyphen_values = true)]
        mean: f64,
        #[arg(long)]
        std: f64,
    },
    /// Bradley-Terry costs from a comparison-count file.
    FitCosts { counts: PathBuf },
    /// Grid sweep to CSV.
    Sweep {
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Write zero runtimes so reruns are byte-identical.
        #[arg(long)]
        no_timing: bool,
    },
    /// Check a policy file against a problem config.
    Verify { policy: PathBuf, config: PathBuf },
}

fn print(value: serde_json::Value) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(&value)?);
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::SolveExact { config } => {
            let cfg = ProblemConfig::from_path(config)?;
            let instance = cfg.instance()?;
            let prior = cfg.discrete_prior()?;
            let report = solve_optimal_policy(&instance, &prior)?;
            let full = full_information_value(&instance, &prior)?;
            let (none_action, none) = no_information_value(&instance, &prior)?;
            let file = PolicyFile::from_report(&report);
            print(json!({
                "policy": file.policy,
                "dm_value": report.dm_value,
                "bic_slack": report.bic_slack,
                "region_masses": report.region_masses,
                "full_information_value": full,
                "no_information_action": none_action,
                "no_information_value": none,
            }))
        }
        Command::SolveApprox {
            config,
            epsilon,
            delta,
            seed,
        } => {
            let cfg = ProblemConfig::from_path(config)?;
            let instance = cfg.instance()?;
            let theta = cfg.theta_true.clone().ok_or_else(|| {
                Error::Config("solve-approx needs theta_true in the config".into())
            })?;
            let seed = seed.unwrap_or(cfg.seed);
            let report = match cfg.prior()? {
                Prior::Discrete(p) => {
                    approximate_policy(&instance, &p, &theta, epsilon, delta, seed)?
                }
                Prior::Gaussian { prior, .. } => {
                    approximate_policy(&instance, &prior, &theta, epsilon, delta, seed)?
                }
            };
            print(json!({
                "true_region": report.true_region.to_string(),
                "recommendation": report.recommendation_dist,
                "lp_value": report.lp_value,
                "epsilon": report.epsilon,
                "delta": report.delta,
                "K": report.k,
                "seed": report.seed,
                "eps_bic": is_eps_bic(&instance, &report)?,
                "policy": PolicyFile::from_policy(&report.full_policy).policy,
            }))
        }
        Command::Oned {
            x0,
            delta,
            cost,
            mean,
            std,
        } => {
            let ex = OneDExample::new(x0, delta, cost, mean, std)?;
            let probs = oned::region_probs(&ex)?;
            let q = oned::bic_q(probs.p_m, cost)?;
            let row = oned::payoff_row(probs.p_m, cost)?;
            let (instance, prior) = oned::discretize(&ex)?;
            let lp = solve_optimal_policy(&instance, &prior)?;
            print(json!({
                "region_probs": probs,
                "q": q,
                "payoff": row,
                "lp_signaling_value": lp.dm_value,
            }))
        }
        Command::FitCosts { counts } => {
            let text = std::fs::read_to_string(counts)?;
            let comparisons: PairwiseComparisons =
                serde_json::from_str(&text).map_err(|e| Error::Config(e.to_string()))?;
            let costs = fit_bradley_terry(&comparisons, DEFAULT_TOL, DEFAULT_MAX_ITER)?;
            print(json!({ "labels": comparisons.labels, "costs": costs }))
        }
        Command::Sweep {
            config,
            out,
            no_timing,
        } => {
            let text = std::fs::read_to_string(config)?;
            let mut cfg: SweepConfig =
                serde_json::from_str(&text).map_err(|e| Error::Config(e.to_string()))?;
            if no_timing {
                cfg.timing = false;
            }
            let rows = run_sweep(&cfg)?;
            write_csv(&rows, BufWriter::new(File::create(&out)?))?;
            eprintln!("wrote {} rows to {}", rows.len(), out.display());
            Ok(())
        }
        Command::Verify { policy, config } => {
            let cfg = ProblemConfig::from_path(config)?;
            let instance = cfg.instance()?;
            let prior = cfg.discrete_prior()?;
            let regions = enumerate_regions(&instance, &prior)?;
            let policy = PolicyFile::from_path(policy)?.to_policy()?;
            let slack = verify_bic(&instance, &regions, &policy)?;
            let value = expected_dm_utility(&instance, &regions, &policy)?;
            let bic = slack >= -BIC_TOL;
            print(json!({ "bic": bic, "bic_slack": slack, "dm_value": value }))?;
            if bic {
                Ok(())
            } else {
                Err(Error::DominanceViolation(format!(
                    "policy is not incentive compatible (slack {slack})"
                )))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let _ = io::Write::flush(&mut io::stdout());
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
