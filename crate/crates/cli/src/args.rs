use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

#[derive(Debug, Parser)]
#[command(name = "fracgm", version, about = "Fractional integrals of Gauss-Markov processes")]
pub struct Cli {
    /// TOML file with defaults for any flag (flags win).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Worker threads.
    #[arg(long, global = true, env = "FRACGM_THREADS")]
    pub threads: Option<usize>,

    #[command(flatten)]
    pub quad: QuadArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Variance curves, one column per alpha.
    VarCurve(VarCurveArgs),
    /// Covariance at fixed u, or over a full (u, t) grid.
    CovTable(CovTableArgs),
    /// Sample-path ensembles by Cholesky factorization or pathwise integration.
    Simulate(SimulateArgs),
    /// Run an acceptance suite and write a JSON report.
    Validate(ValidateArgs),
    /// Voltage ensemble of the fractional integrator neuron.
    Neuro(NeuroArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProcessName {
    Fibm,
    Fiou,
    Fisou,
    Iou,
    Isou,
    Ou,
    Sou,
}

impl ProcessName {
    pub fn as_str(self) -> &'static str {
        match self {
            ProcessName::Fibm => "fibm",
            ProcessName::Fiou => "fiou",
            ProcessName::Fisou => "fisou",
            ProcessName::Iou => "iou",
            ProcessName::Isou => "isou",
            ProcessName::Ou => "ou",
            ProcessName::Sou => "sou",
        }
    }

    /// Whether the process is a fractional integral, so alpha applies.
    pub fn fractional(self) -> bool {
        matches!(self, ProcessName::Fibm | ProcessName::Fiou | ProcessName::Fisou)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CrossTerm {
    Zero,
    Clamped,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Cholesky,
    Pathwise,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SuiteName {
    Limits,
    Crossing,
    Mc,
    Neuro,
    All,
}

#[derive(Debug, Args)]
pub struct QuadArgs {
    #[arg(long, global = true)]
    pub nodes_per_panel: Option<usize>,
    #[arg(long, global = true)]
    pub panels: Option<usize>,
    #[arg(long, global = true)]
    pub rel_tol: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ProcessArgs {
    #[arg(long, value_enum)]
    pub process: Option<ProcessName>,
    #[arg(long, allow_negative_numbers = true)]
    pub mu: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub sigma: Option<f64>,
    /// Asymptotic mean of the OU process.
    #[arg(long, allow_negative_numbers = true)]
    pub beta: Option<f64>,
    /// Initial value of the OU process.
    #[arg(long, allow_negative_numbers = true)]
    pub y: Option<f64>,
    /// Coupling of the stationary start in FISOU.
    #[arg(long, value_enum)]
    pub fisou_cross: Option<CrossTerm>,
}

#[derive(Debug, Args)]
pub struct RangeArgs {
    #[arg(long)]
    pub t_start: Option<f64>,
    #[arg(long)]
    pub t_end: Option<f64>,
    #[arg(long)]
    pub t_points: Option<usize>,
}

#[derive(Debug, Args)]
pub struct VarCurveArgs {
    #[command(flatten)]
    pub process: ProcessArgs,
    /// Comma-separated orders.
    #[arg(long, value_delimiter = ',')]
    pub alphas: Vec<f64>,
    #[command(flatten)]
    pub range: RangeArgs,
    /// Output file, `-` for stdout.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CovTableArgs {
    #[command(flatten)]
    pub process: ProcessArgs,
    #[arg(long, value_delimiter = ',')]
    pub alphas: Vec<f64>,
    /// Fixed first argument of the covariance.
    #[arg(long)]
    pub u: Option<f64>,
    /// Tabulate every (u, t) pair of the range instead of a fixed-u slice.
    #[arg(long)]
    pub full_grid: bool,
    #[command(flatten)]
    pub range: RangeArgs,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub process: ProcessArgs,
    #[arg(long, value_delimiter = ',')]
    pub alphas: Vec<f64>,
    /// Time step; the grid is h, 2h, ..., t_end.
    #[arg(long)]
    pub h: Option<f64>,
    #[arg(long)]
    pub t_end: Option<f64>,
    #[arg(long)]
    pub n_paths: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum)]
    pub method: Option<Method>,
    /// Reuse one Gaussian ensemble for every alpha.
    #[arg(long)]
    pub shared_z: bool,
    /// Output file; with several alphas `-alpha<value>` is inserted before the extension.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(long, value_enum)]
    pub suite: Option<SuiteName>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// JSON report file, `-` for stdout.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct NeuroArgs {
    /// TOML file with the neuron parameters.
    #[arg(long)]
    pub params: Option<PathBuf>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub h: Option<f64>,
    #[arg(long)]
    pub t_end: Option<f64>,
    #[arg(long)]
    pub n_paths: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}
