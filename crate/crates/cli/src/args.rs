use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(
    name = "oibdp",
    version,
    about = "Order-inversal breakdown points for linear instance ranking",
    after_help = "Exit codes: 0 ok, 1 check failed, 2 breakdown nonexistent, 3 solver did not \
                  converge, 64 usage error, 65 malformed data, 66 unreadable input.\n\
                  OIBDP_THREADS caps the number of worker threads."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form finite-sample breakdown point of a problem class.
    Bdp(BdpArgs),
    /// Breakdown points over a range of sample sizes and dimensions as CSV.
    Sweep(SweepArgs),
    /// Contaminate a dataset with an outlier scheme.
    Attack(AttackArgs),
    /// Measure the breakdown point of a fitted ranker empirically.
    Verify(VerifyArgs),
    /// Mean empirical breakdown point over noise draws.
    Expected(ExpectedArgs),
    /// Asymptotic breakdown points, localized curves and break-even points.
    Asymptote(AsymptoteArgs),
    /// Check that negating the responses swaps the SVR dual multipliers.
    SvrCheck(SvrCheckArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TaskArg {
    Hard,
    Binary,
    Dpartite,
    Localized,
    Weak,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LossArg {
    Indicator,
    Unbounded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum VariantArg {
    TrueBestk,
    PredictedBestk,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PartArg {
    Ranking,
    Classification,
}

/// Flags shared by every command that names a problem class.
#[derive(Debug, Clone, Args)]
pub struct ProblemArgs {
    #[arg(long, value_enum)]
    pub task: TaskArg,
    /// Number of instances.
    #[arg(long)]
    pub n: Option<usize>,
    /// Number of regressors.
    #[arg(long, default_value_t = 1)]
    pub p: usize,
    /// Top-K size for localized and weak ranking.
    #[arg(long = "K")]
    pub k: Option<usize>,
    /// Number of ordered classes for d-partite ranking.
    #[arg(long)]
    pub d_classes: Option<u32>,
    #[arg(long, value_enum, default_value = "indicator")]
    pub loss: LossArg,
    #[arg(long, value_enum, default_value = "true-bestk")]
    pub variant: VariantArg,
    /// Localized part carrying the unbounded loss.
    #[arg(long, value_enum, default_value = "ranking")]
    pub part: PartArg,
}

#[derive(Debug, Args)]
pub struct BdpArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    /// Number of nonzero true coefficients (sparse support).
    #[arg(long)]
    pub q: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub task: TaskArg,
    /// Inclusive sample-size range `a:b`.
    #[arg(long)]
    pub n_range: String,
    /// Comma-separated dimensions.
    #[arg(long, default_value = "1", value_delimiter = ',')]
    pub p: Vec<usize>,
    /// Fixed top-K size.
    #[arg(long = "K", conflicts_with = "k_fraction")]
    pub k: Option<usize>,
    /// Comma-separated top-K sizes as fractions of n, rounded up.
    #[arg(long, value_delimiter = ',')]
    pub k_fraction: Vec<f64>,
    #[arg(long)]
    pub d_classes: Option<u32>,
    #[arg(long, value_enum, default_value = "indicator")]
    pub loss: LossArg,
    #[arg(long, value_enum, default_value = "true-bestk")]
    pub variant: VariantArg,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Continuous,
    Binary,
    Dpartite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchemeArg {
    Univariate,
    Axiswise,
    AxiswiseUnbounded,
    Binary,
    Localized,
}

#[derive(Debug, Clone, Args)]
pub struct PlacementArgs {
    /// Spacing between successive outliers.
    #[arg(long, default_value_t = 1.0)]
    pub gap: f64,
    /// Stand-in for an infinitely remote position or response.
    #[arg(long, default_value_t = 1e9)]
    pub magnitude: f64,
}

#[derive(Debug, Args)]
pub struct AttackArgs {
    /// Dataset CSV with header `x1,...,xp,y`.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "continuous")]
    pub kind: KindArg,
    #[arg(long)]
    pub d_classes: Option<u32>,
    #[arg(long, value_enum)]
    pub scheme: SchemeArg,
    /// Number of outliers.
    #[arg(long)]
    pub m: usize,
    #[arg(long = "K")]
    pub k: Option<usize>,
    /// Comma-separated reference coefficient; only its signs are used.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub reference: Option<Vec<f64>>,
    #[command(flatten)]
    pub placement: PlacementArgs,
    /// Contaminated dataset CSV.
    #[arg(long)]
    pub output: PathBuf,
    /// JSON manifest describing the attack.
    #[arg(long)]
    pub manifest: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FitLossArg {
    Indicator,
    Sigmoid,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    /// Dataset CSV; a deterministic synthetic design is used when absent.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Seed of the synthetic design for p >= 2.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Comma-separated reference coefficient; all ones when absent.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub reference: Option<Vec<f64>>,
    /// Pairwise loss minimized by the fitter.
    #[arg(long, value_enum, default_value = "indicator")]
    pub fit_loss: FitLossArg,
    /// Also run the exhaustive adversary search (n <= 10, p <= 2).
    #[arg(long)]
    pub brute_force: bool,
    #[command(flatten)]
    pub placement: PlacementArgs,
    /// Per-m scan summary as CSV.
    #[arg(long)]
    pub trace_csv: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NoiseArg {
    Zero,
    Gaussian,
    Uniform,
}

#[derive(Debug, Args)]
pub struct ExpectedArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 1)]
    pub p: usize,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, value_enum, default_value = "gaussian")]
    pub noise: NoiseArg,
    /// Standard deviation (Gaussian) or half width (uniform).
    #[arg(long, default_value_t = 1.0)]
    pub scale: f64,
    #[arg(long)]
    pub seed: u64,
    /// One-line CSV summary.
    #[arg(long)]
    pub summary_csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AsymptoteArgs {
    #[arg(long, value_enum)]
    pub task: TaskArg,
    #[arg(long, value_enum, default_value = "true-bestk")]
    pub variant: VariantArg,
    #[arg(long, value_enum, default_value = "indicator")]
    pub loss: LossArg,
    /// Fixed dimension.
    #[arg(long, default_value_t = 1, conflicts_with = "b")]
    pub p: usize,
    /// Dimension growing like `b n`.
    #[arg(long)]
    pub b: Option<f64>,
    /// Limit of K/n; localized curves are emitted over a grid when absent.
    #[arg(long)]
    pub d: Option<f64>,
    /// Grid intervals for localized curves.
    #[arg(long, default_value_t = 200)]
    pub steps: usize,
    /// Print the break-even points of the localized curve as JSON.
    #[arg(long)]
    pub emit_breakevens: bool,
    /// Curve CSV file; standard output when absent and no break-evens are
    /// requested.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelArg {
    Linear,
    Polynomial,
}

#[derive(Debug, Args)]
pub struct SvrCheckArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub p: usize,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
    #[arg(long, default_value_t = 0.1)]
    pub eps: f64,
    #[arg(long, value_enum, default_value = "linear")]
    pub kernel: KernelArg,
    #[arg(long, default_value_t = 2)]
    pub degree: u32,
    #[arg(long, default_value_t = 1.0)]
    pub coef0: f64,
    /// Allowed sup-norm gap between swapped multipliers.
    #[arg(long, default_value_t = 1e-5)]
    pub tol: f64,
}
