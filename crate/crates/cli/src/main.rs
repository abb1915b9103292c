//! `vanet` — scenario runner for the connectivity library.

mod commands;
mod config;
mod output;

use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand};

use commands::SweepAxis;
use config::RawInputs;
use output::Format;

#[derive(Parser)]
#[command(
    name = "vanet",
    version,
    about = "Connectivity statistics for a 1-D chain of vehicles with Rayleigh-fading links"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct CommonArgs {
    /// Number of vehicles
    #[arg(long)]
    n: Option<u32>,
    /// Fixed link probability (conflicts with --spacing)
    #[arg(long)]
    p: Option<f64>,
    /// Spacing model as family:params — exp:RHO, gamma:SHAPE,SCALE,
    /// lognormal:MU,SIGMA, truncnormal:MEAN,SD, point:D0
    #[arg(long)]
    spacing: Option<String>,
    /// Channel preset: paper-sec4 (alias: default); fine-grained overrides
    /// go through the config file's channel.* keys
    #[arg(long)]
    channel: Option<String>,
    /// Flat key = value config file; command-line flags override it
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file (stdout when omitted); CSV also writes <stem>.moments.csv
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Args, Debug)]
struct TrialArgs {
    /// Number of Monte Carlo trials
    #[arg(long)]
    trials: Option<u64>,
    /// RNG seed; identical seeds give bit-identical outputs
    #[arg(long)]
    seed: Option<u64>,
    /// How physical links are realized: threshold (uniform draw against the
    /// exceedance probability) or snr (draw the fading SNR and compare)
    #[arg(long, default_value = "threshold")]
    realization: Realization,
}

#[derive(clap::ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Realization {
    Threshold,
    Snr,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Closed-form PMFs and moments for one scenario
    Analyze {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Monte Carlo simulation of one scenario
    Simulate {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        trial: TrialArgs,
        /// Co-emit analytic columns and per-statistic TV distances
        #[arg(long)]
        compare: bool,
    },
    /// Exhaustive enumeration over all link patterns (n <= 16)
    Oracle {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Analytic, simulated, and enumerated tables side by side
    Compare {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        trial: TrialArgs,
    },
    /// Grid of analyze runs over p, rho, or n; writes per-point files and
    /// an index.csv into --out DIR
    Sweep {
        #[command(flatten)]
        common: CommonArgs,
        /// p grid as start:stop:count
        #[arg(long, value_name = "START:STOP:COUNT")]
        p_grid: Option<String>,
        /// Exponential-spacing rho grid as start:stop:count
        #[arg(long, value_name = "START:STOP:COUNT")]
        rho_grid: Option<String>,
        /// n grid as start:stop:step
        #[arg(long, value_name = "START:STOP:STEP")]
        n_grid: Option<String>,
    },
}

fn raw_inputs(common: &CommonArgs, trial: Option<&TrialArgs>) -> RawInputs {
    RawInputs {
        config: common.config.clone(),
        n: common.n,
        p: common.p,
        spacing: common.spacing.clone(),
        channel: common.channel.clone(),
        trials: trial.and_then(|t| t.trials),
        seed: trial.and_then(|t| t.seed),
        snr_draw: trial.is_some_and(|t| t.realization == Realization::Snr),
    }
}

fn main() {
    if let Err(err) = run() {
        eprintln!("error: {err:#}");
        std::process::exit(1);
    }
}

fn run() -> Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Analyze { common } => {
            let resolved = config::resolve(&raw_inputs(&common, None))?;
            commands::analyze(&resolved, common.out.as_deref(), common.format)
        }
        Command::Simulate {
            common,
            trial,
            compare,
        } => {
            let resolved = config::resolve(&raw_inputs(&common, Some(&trial)))?;
            commands::simulate(&resolved, compare, common.out.as_deref(), common.format)
        }
        Command::Oracle { common } => {
            let resolved = config::resolve(&raw_inputs(&common, None))?;
            commands::oracle_cmd(&resolved, common.out.as_deref(), common.format)
        }
        Command::Compare { common, trial } => {
            let resolved = config::resolve(&raw_inputs(&common, Some(&trial)))?;
            commands::compare(&resolved, common.out.as_deref(), common.format)
        }
        Command::Sweep {
            common,
            p_grid,
            rho_grid,
            n_grid,
        } => {
            let axes = [p_grid.is_some(), rho_grid.is_some(), n_grid.is_some()];
            if axes.iter().filter(|&&x| x).count() != 1 {
                bail!("sweep needs exactly one of --p-grid, --rho-grid, --n-grid");
            }
            let axis = if let Some(text) = p_grid {
                SweepAxis::P(commands::parse_float_grid(&text)?)
            } else if let Some(text) = rho_grid {
                SweepAxis::Rho(commands::parse_float_grid(&text)?)
            } else {
                SweepAxis::N(commands::parse_int_grid(&n_grid.expect("one axis"))?)
            };

            let mut raw = raw_inputs(&common, None);
            // The swept parameter is filled in per point; a p or n sweep
            // still needs some base link model for resolve().
            if raw.p.is_none() && raw.spacing.is_none() {
                match axis {
                    SweepAxis::P(_) | SweepAxis::N(_) => raw.p = Some(0.5),
                    SweepAxis::Rho(_) => raw.spacing = Some("exp:0.01".into()),
                }
            }
            let resolved = config::resolve(&raw)?;
            let Some(dir) = common.out.as_deref() else {
                bail!("sweep requires --out DIR");
            };
            commands::sweep(&resolved, &axis, dir, common.format)
        }
    }
}
