use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qpf_core::complexity::LogBase;
use qpf_core::hhl::ScalingRule;

#[derive(Debug, Parser)]
#[command(
    name = "qpf",
    version,
    about = "DC power flow solved classically and with a simulated HHL circuit",
    propagate_version = true
)]
pub struct Cli {
    /// Print the version banner on stderr.
    #[arg(long, short, global = true)]
    pub verbose: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve the DC power flow of a network.
    Solve(SolveArgs),
    /// Size, sparsity and spectrum of the reduced susceptance matrix.
    Stats(StatsArgs),
    /// Width, depth and CNOT count of the HHL circuit, without simulating it.
    Metrics(MetricsArgs),
    /// Dimension where the scaled quantum cost drops below the classical cost.
    Crossover(CrossoverArgs),
    /// Both cost curves on a log-spaced grid of dimensions.
    Sweep(SweepArgs),
    /// Classical-to-quantum cost ratio at one dimension.
    Ratio(RatioArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Fixture {
    Wscc9,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Classical,
    Hhl,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scaling {
    /// Smallest eigenvalue on clock integer 1, `c = λ_min`.
    AnchorSmallest,
    /// Largest eigenvalue on the top clock integer.
    FullRange,
}

impl From<Scaling> for ScalingRule {
    fn from(s: Scaling) -> Self {
        match s {
            Scaling::AnchorSmallest => ScalingRule::AnchorSmallest,
            Scaling::FullRange => ScalingRule::FullRange,
        }
    }
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct Source {
    /// Built-in network.
    #[arg(long, value_enum)]
    pub fixture: Option<Fixture>,

    /// Network JSON file, or `-` for stdin.
    #[arg(long, value_name = "PATH")]
    pub input: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct Output {
    /// Output format; json unless stated otherwise for the command.
    #[arg(long, value_enum)]
    pub format: Option<Format>,

    /// Write to this file instead of stdout.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct HhlArgs {
    /// Clock register size.
    #[arg(long, default_value_t = 5)]
    pub alpha: usize,

    /// Evolution time; `c` then defaults to the first clock eigenvalue.
    #[arg(long)]
    pub t: Option<f64>,

    /// Reciprocal-rotation constant.
    #[arg(long)]
    pub c: Option<f64>,

    /// Rule mapping the spectrum onto the clock.
    #[arg(long, value_enum, default_value_t = Scaling::AnchorSmallest)]
    pub scaling: Scaling,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub source: Source,

    #[arg(long, value_enum, default_value_t = Method::Classical)]
    pub method: Method,

    #[command(flatten)]
    pub hhl: HhlArgs,

    /// Write the HHL circuit in text form to this file.
    #[arg(long, value_name = "PATH")]
    pub dump: Option<PathBuf>,

    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[command(flatten)]
    pub source: Source,

    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct MetricsArgs {
    #[command(flatten)]
    pub source: Source,

    #[command(flatten)]
    pub hhl: HhlArgs,

    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct CostArgs {
    /// Sparsity for both models.
    #[arg(long, default_value_t = 6.0)]
    pub s: f64,

    /// Condition parameter for both models.
    #[arg(long, default_value_t = 0.1)]
    pub k: f64,

    #[arg(long)]
    pub s_classical: Option<f64>,
    #[arg(long)]
    pub k_classical: Option<f64>,
    #[arg(long)]
    pub s_quantum: Option<f64>,
    #[arg(long)]
    pub k_quantum: Option<f64>,

    #[arg(long, default_value_t = 0.1)]
    pub eps_classical: f64,

    #[arg(long, default_value_t = 0.37)]
    pub eps_quantum: f64,

    /// Base of log(N) in the quantum model: 2, e or 10.
    #[arg(long, default_value = "2")]
    pub log_n_base: LogBase,

    /// Base of log(1/eps) in the classical model: 2, e or 10.
    #[arg(long, default_value = "e")]
    pub log_eps_base: LogBase,
}

#[derive(Debug, Args)]
pub struct CrossoverArgs {
    #[command(flatten)]
    pub cost: CostArgs,

    /// Per-unit cost handicap of the quantum machine.
    #[arg(long, default_value_t = 34.0)]
    pub base_ratio: f64,

    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub cost: CostArgs,

    #[arg(long, default_value_t = 34.0)]
    pub base_ratio: f64,

    #[arg(long, default_value_t = 10.0)]
    pub n_min: f64,

    #[arg(long, default_value_t = 2000.0)]
    pub n_max: f64,

    #[arg(long, default_value_t = 100)]
    pub steps: usize,

    /// Output format; csv by default.
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct RatioArgs {
    #[command(flatten)]
    pub cost: CostArgs,

    /// System dimension.
    #[arg(long, default_value_t = 8.0)]
    pub n: f64,

    #[command(flatten)]
    pub output: Output,
}
