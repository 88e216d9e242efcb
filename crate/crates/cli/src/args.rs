//! Command-line arguments.

use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand};
use lxf_core::WeightFunction;

#[derive(Debug, Parser)]
#[command(name = "lxf", version, about = "Staggered Lax-Friedrichs runs and compactness diagnostics")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the scheme and write the trajectory.
    Run(RunArgs),
    /// Run and evaluate every diagnostic.
    Diagnose(DiagnoseArgs),
    /// Repeat the key sums over a ladder of resolutions.
    Refine(RefineArgs),
    /// Translation moduli and their fitted exponents only.
    Translate(TranslateArgs),
}

#[derive(Clone, Debug, Args)]
#[command(group(ArgGroup::new("source").required(true).args(["config", "problem"])))]
pub struct ProblemArgs {
    /// Problem description in TOML.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Built-in problem name.
    #[arg(long, value_name = "NAME")]
    pub problem: Option<String>,
    /// Output directory, created if missing.
    #[arg(long, value_name = "DIR", default_value = "out")]
    pub out: PathBuf,
    /// Cells of width 2Δx across the domain.
    #[arg(long, default_value_t = 200)]
    pub cells: usize,
    /// CFL margin: λ·|∂f/∂u| ≤ 1 − κ.
    #[arg(long, default_value_t = 0.1)]
    pub kappa: f64,
    /// Final time, overriding the problem's.
    #[arg(long, value_name = "T")]
    pub time: Option<f64>,
    /// `unit` or `decay:N`.
    #[arg(long, default_value = "unit")]
    pub weight: WeightFunction,
    /// Refuse lattices whose stored trajectory would exceed this size.
    #[arg(long, value_name = "MB", default_value_t = 2048)]
    pub memory_budget_mb: usize,
}

#[derive(Clone, Debug, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub common: ProblemArgs,
    /// Also write the little-endian binary dump `trajectory.lxft`.
    #[arg(long)]
    pub binary: bool,
}

#[derive(Clone, Debug, Args)]
pub struct ModulusArgs {
    /// Spatial offsets h; defaults to 12 points from 4Δx to width/8.
    #[arg(long, value_delimiter = ',')]
    pub offsets: Vec<f64>,
    /// Temporal offsets τ; defaults to 12 points from 4Δt to T/4.
    #[arg(long, value_delimiter = ',')]
    pub time_offsets: Vec<f64>,
}

#[derive(Clone, Debug, Args)]
pub struct DiagnoseArgs {
    #[command(flatten)]
    pub common: ProblemArgs,
    /// Spatial shifts ν (translation by 2ν cells).
    #[arg(long, value_delimiter = ',', default_values_t = [1, 3, 5])]
    pub shifts: Vec<usize>,
    /// Temporal shifts θ, even.
    #[arg(long, value_delimiter = ',', default_values_t = [2, 4])]
    pub thetas: Vec<usize>,
    #[command(flatten)]
    pub moduli: ModulusArgs,
}

#[derive(Clone, Debug, Args)]
pub struct RefineArgs {
    #[command(flatten)]
    pub common: ProblemArgs,
    /// Increasing cell counts.
    #[arg(long, value_delimiter = ',', default_values_t = [50, 100, 200, 400])]
    pub ladder: Vec<usize>,
}

#[derive(Clone, Debug, Args)]
pub struct TranslateArgs {
    #[command(flatten)]
    pub common: ProblemArgs,
    #[command(flatten)]
    pub moduli: ModulusArgs,
}
