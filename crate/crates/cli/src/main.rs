//! `szilard-lab`: every protocol and calculator of the library as a
//! subcommand, with reproducible run directories.
//!
//! Exit codes: 0 success, 1 usage or validation error, 2 numerical failure.

// `!(x > 0.0)` also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod output;

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Debug, Parser)]
#[command(name = "szilard-lab", version, about = "Stochastic-thermodynamics laboratory")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

/// Flags shared by every subcommand. Flags override the config file.
#[derive(Debug, Clone, Args)]
pub struct Common {
    /// JSON config: `{"run": {...}, "params": {...}}`
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Number of trajectories.
    #[arg(long, global = true)]
    pub traj: Option<usize>,
    /// Worker threads (0 = all cores). Results do not depend on it.
    #[arg(long, global = true, env = "SZILARD_LAB_THREADS")]
    pub threads: Option<usize>,
    /// Output directory for manifest.json, summary.json and CSV files.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Bath temperature.
    #[arg(long, global = true)]
    pub temperature: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Measurement-free Szilard engine cycle.
    Szilard(SzilardArgs),
    /// Single-bit erasure, optionally with a storage-error sweep.
    Erase(EraseArgs),
    /// Feedback staircase with a movable block.
    Staircase(StaircaseArgs),
    /// Mean first-passage times over a set of barrier heights.
    Kramers(KramersArgs),
    /// Switch-cost calculator.
    Switch(SwitchArgs),
    /// Double-well spectra and stability classification.
    Molecule(MoleculeArgs),
    /// Fast invariant suite.
    Selftest,
}

#[derive(Debug, Args)]
pub struct SzilardArgs {
    /// Error rate of the partition switch.
    #[arg(long)]
    pub switch_epsilon: Option<f64>,
    /// Error rates at which to re-audit the cycle (comma separated).
    #[arg(long, value_delimiter = ',')]
    pub audit_epsilon: Vec<f64>,
    /// Record this many trajectories into trajectories.csv.
    #[arg(long, default_value_t = 0)]
    pub record: usize,
    #[arg(long, default_value_t = 1000)]
    pub stride: usize,
}

#[derive(Debug, Args)]
pub struct EraseArgs {
    #[arg(long)]
    pub tilt: Option<f64>,
    /// Multiply every stage duration.
    #[arg(long)]
    pub slow: Option<f64>,
    /// Also measure storage error at these barrier heights (comma separated).
    #[arg(long, value_delimiter = ',')]
    pub storage_barriers: Vec<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub hold: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub storage_dt: f64,
    #[arg(long, default_value_t = 0)]
    pub record: usize,
    #[arg(long, default_value_t = 1000)]
    pub stride: usize,
}

#[derive(Debug, Args)]
pub struct StaircaseArgs {
    #[arg(long, value_enum)]
    pub policy: Option<PolicyArg>,
    /// Sweep these block heights (comma separated).
    #[arg(long, value_delimiter = ',')]
    pub block_heights: Vec<f64>,
    /// Write per-trajectory outcomes to trajectories.csv.
    #[arg(long)]
    pub trajectories: bool,
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
pub enum PolicyArg {
    Never,
    Advance,
}

#[derive(Debug, Args)]
pub struct KramersArgs {
    /// Barrier heights (comma separated).
    #[arg(long, value_delimiter = ',')]
    pub barriers: Vec<f64>,
    #[arg(long)]
    pub dt: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SwitchArgs {
    /// Error probability; W follows as Θ ln(1/ε).
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Effective noise energy; otherwise computed from T and ω₀.
    #[arg(long)]
    pub theta: Option<f64>,
    /// Barrier W; ε follows as exp(−W/Θ).
    #[arg(long)]
    pub barrier: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub omega0: f64,
    /// Pointer displacement; W = ω₀D² when neither ε nor W is given.
    #[arg(long, default_value_t = 2.0)]
    pub d: f64,
    #[arg(long, default_value_t = 1.0)]
    pub tau0: f64,
    /// Computation volume for the gate cost Θ ln N.
    #[arg(long, default_value_t = 2.0)]
    pub n: f64,
    /// Tabulate over one parameter; the others stay fixed.
    #[arg(long, value_enum, requires = "values")]
    pub sweep: Option<SweepParam>,
    /// Values for `--sweep` (comma separated).
    #[arg(long, value_delimiter = ',')]
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Copy, serde::Serialize, clap::ValueEnum)]
pub enum SweepParam {
    #[value(name = "T")]
    T,
    Omega0,
    #[value(name = "D")]
    D,
    Tau0,
    #[value(name = "N")]
    N,
    Theta,
    Epsilon,
    Barrier,
}

#[derive(Debug, Args)]
pub struct MoleculeArgs {
    /// Quadratic coefficients b of a x⁴ − b x² (comma separated).
    #[arg(long, value_delimiter = ',')]
    pub b: Vec<f64>,
    #[arg(long)]
    pub mass: Option<f64>,
    #[arg(long)]
    pub n_grid: Option<usize>,
    #[arg(long)]
    pub tau_relax: Option<f64>,
    #[arg(long)]
    pub tau_obs: Option<f64>,
    /// Also write the grid eigenvectors to eigenstates.csv.
    #[arg(long)]
    pub dump_states: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::dispatch(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}
