use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "drnews",
    version,
    about = "Offer strategies for a renewable producer under two-price imbalance settlement"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute one offer.
    #[command(args_override_self = true)]
    Solve(SolveArgs),
    /// Tabulate the deformed CDF band around a forecast.
    #[command(args_override_self = true)]
    Deform(DeformArgs),
    /// Monte-Carlo ε sweep and γ for both ball kinds.
    #[command(args_override_self = true)]
    Simulate(SimulateArgs),
    /// γ of both ball kinds as a function of the number of draws m.
    #[command(args_override_self = true)]
    Msweep(MsweepArgs),
    /// Cross-validate, then evaluate strategies on market data.
    #[command(args_override_self = true)]
    Backtest(BacktestArgs),
    /// Only the cross-validation step of a backtest.
    #[command(args_override_self = true)]
    Crossval(BacktestArgs),
    /// Write a synthetic market dataset.
    #[command(args_override_self = true)]
    Synth(SynthArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Master seed for every random stream.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub output: Format,
    /// Output file, written atomically. Standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker thread cap.
    #[arg(long)]
    pub threads: Option<usize>,
    /// `key=value` file with one flag per line; command-line flags win.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DistArgs {
    /// `uniform`, `beta:A,B` or `heaviside:LOC`.
    #[arg(long, conflicts_with = "forecast")]
    pub dist: Option<String>,
    /// Quantile forecast file with header `level,value`.
    #[arg(long)]
    pub forecast: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SolveStrategy {
    Direct,
    DrOmega,
    DrS,
    RobustOmega,
    RobustS,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Ball {
    Uniform,
    LevelAdjusted,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long, value_enum)]
    pub strategy: SolveStrategy,
    #[command(flatten)]
    pub dist: DistArgs,
    /// Estimated chance of success.
    #[arg(long)]
    pub tau: f64,
    #[arg(long, default_value_t = 0.0)]
    pub rho: f64,
    #[arg(long, default_value_t = 0.0)]
    pub eps: f64,
    #[arg(long, value_enum, default_value_t = Ball::Uniform)]
    pub ball: Ball,
    /// Shape of a level-adjusted ball.
    #[arg(long)]
    pub theta: Option<f64>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct DeformArgs {
    #[command(flatten)]
    pub dist: DistArgs,
    #[arg(long)]
    pub rho: f64,
    /// Spacing of the output x grid.
    #[arg(long, default_value_t = 0.01)]
    pub grid_step: f64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct SimArgs {
    /// True generation distribution.
    #[arg(long, default_value = "beta:2,6")]
    pub dist: String,
    /// True chance of success.
    #[arg(long, default_value_t = 0.75)]
    pub tau: f64,
    /// Replicates.
    #[arg(long, default_value_t = 1_000_000)]
    pub n: u64,
    #[arg(long, default_value_t = 0.9)]
    pub theta: f64,
    #[arg(long, default_value_t = 0.01)]
    pub eps_step: f64,
    #[arg(long, default_value_t = 1.0)]
    pub eps_max: f64,
    #[arg(long, default_value_t = 20)]
    pub batches: u32,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Bernoulli draws per replicate.
    #[arg(long, default_value_t = 10)]
    pub m: u32,
    #[command(flatten)]
    pub sim: SimArgs,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct MsweepArgs {
    #[arg(long, default_value_t = 1)]
    pub m_min: u32,
    #[arg(long, default_value_t = 75)]
    pub m_max: u32,
    #[command(flatten)]
    pub sim: SimArgs,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CvModeArg {
    Fixed,
    Sliding,
}

#[derive(Debug, Args)]
pub struct BacktestArgs {
    /// Market CSV with header `timestamp,pi_s,pi_b,s_L,omega_star`.
    #[arg(long, required_unless_present = "synthetic_days")]
    pub market: Option<PathBuf>,
    /// Directory of per-hour forecast files; defaults to `forecasts/` next
    /// to the market file.
    #[arg(long)]
    pub forecasts: Option<PathBuf>,
    /// Generate this many days of synthetic market in memory instead.
    #[arg(long, conflicts_with = "market")]
    pub synthetic_days: Option<u32>,
    /// Chance of a long system in synthetic data.
    #[arg(long, default_value_t = 0.75)]
    pub synthetic_tau: f64,
    /// Draw a different Beta forecast for every synthetic hour instead of
    /// Beta(2,6) throughout.
    #[arg(long)]
    pub varying_forecasts: bool,
    /// Fail on missing hours instead of warning.
    #[arg(long)]
    pub strict: bool,
    /// Multiply every penalty by this factor.
    #[arg(long, default_value_t = 1.0)]
    pub penalty_scale: f64,
    #[arg(long, default_value_t = 131)]
    pub warm_start: u32,
    #[arg(long, default_value_t = 91)]
    pub tau_window: u32,
    #[arg(long, default_value_t = 40)]
    pub cv_days: u32,
    #[arg(long, value_enum, default_value_t = CvModeArg::Fixed)]
    pub cv_mode: CvModeArg,
    /// `start:stop:step` or a comma-separated list.
    #[arg(long)]
    pub rho_grid: Option<String>,
    #[arg(long)]
    pub eps_grid: Option<String>,
    #[arg(long)]
    pub theta_grid: Option<String>,
    /// Comma-separated candidate windows in days.
    #[arg(long)]
    pub m_grid: Option<String>,
    /// Comma-separated subset of oracle, bn, dr-omega, dr-s-uniform,
    /// dr-s-level-adjusted, robust-s, robust-omega.
    #[arg(long)]
    pub strategies: Option<String>,
    /// Pool all hours of the day into one chance-of-success model.
    #[arg(long)]
    pub pooled: bool,
    /// Fail instead of using τ̂ = 0.5 when a window has no usable outcome.
    #[arg(long)]
    pub no_fallback: bool,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// Output directory; receives `market.csv` and `forecasts/`.
    #[arg(long)]
    pub dir: PathBuf,
    #[arg(long, default_value_t = 731)]
    pub days: u32,
    #[arg(long, default_value_t = 0.75)]
    pub tau: f64,
    /// First delivery day, `YYYY-MM-DD`.
    #[arg(long, default_value = "2019-01-01")]
    pub start: String,
    /// Draw a different Beta forecast for every hour instead of Beta(2,6)
    /// throughout.
    #[arg(long)]
    pub varying_forecasts: bool,
    #[command(flatten)]
    pub common: Common,
}
