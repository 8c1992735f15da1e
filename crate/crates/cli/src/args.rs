use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kraus_core::sampler::DEFAULT_SHOTS;
use kraus_core::DEFAULT_TOL;

#[derive(Debug, Parser)]
#[command(
    name = "kraus-sim",
    version,
    about = "Open-system evolution through unitary dilations of Kraus operators"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Populations over a time grid, as CSV.
    Evolve(RunArgs),
    /// Expectation value of an observable over a time grid, as CSV.
    Expect(ExpectArgs),
    /// Check completeness of a Kraus set; exit 0 on pass, 1 on fail.
    Validate(ValidateArgs),
    /// Build the unitary dilation of a contraction, as JSON.
    Dilate(DilateArgs),
    /// Print closed-form gate counts and optionally decompose a unitary.
    Complexity(ComplexityArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ChannelKind {
    AmplitudeDamping,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Ensemble,
    Vectorized,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exact,
    Shots,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Built-in channel.
    #[arg(long, value_enum, conflicts_with = "kraus")]
    pub channel: Option<ChannelKind>,

    /// Decay rate in s⁻¹ for the built-in channel.
    #[arg(long, default_value_t = 1.52e9)]
    pub gamma: f64,

    /// Time-independent Kraus set (JSON), applied once at every grid point.
    #[arg(long)]
    pub kraus: Option<PathBuf>,

    /// Initial pure-state ensemble (JSON). Defaults to {(1/2, |1⟩), (1/2, |+⟩)}.
    #[arg(long, conflicts_with = "density")]
    pub state: Option<PathBuf>,

    /// Initial density matrix (JSON); vectorized method only.
    #[arg(long)]
    pub density: Option<PathBuf>,

    /// Grid start in seconds.
    #[arg(long, default_value_t = 0.0)]
    pub t_start: f64,

    /// Grid end in seconds.
    #[arg(long, default_value_t = 1e-9)]
    pub t_end: f64,

    /// Grid step in seconds.
    #[arg(long, default_value_t = 1e-11)]
    pub dt: f64,

    #[arg(long, value_enum, default_value_t = MethodArg::Ensemble)]
    pub method: MethodArg,

    #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
    pub mode: ModeArg,

    /// Shots per branch in shots mode.
    #[arg(long, default_value_t = DEFAULT_SHOTS)]
    pub shots: u64,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Measurement basis: `identity`, `hadamard`, or a path to a unitary matrix (JSON).
    #[arg(long, default_value = "identity")]
    pub basis: String,

    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Tolerance for Kraus completeness.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
}

#[derive(Debug, Clone, Args)]
pub struct ExpectArgs {
    #[command(flatten)]
    pub run: RunArgs,

    /// Hermitian observable (JSON matrix).
    #[arg(long)]
    pub observable: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct ValidateArgs {
    #[arg(long)]
    pub kraus: PathBuf,

    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
}

#[derive(Debug, Clone, Args)]
pub struct DilateArgs {
    /// Contraction to dilate (JSON matrix).
    #[arg(long)]
    pub matrix: PathBuf,

    #[arg(long, default_value_t = 1)]
    pub order: usize,

    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ComplexityArgs {
    /// Base dimension; defaults to the unitary's dimension, or 2.
    #[arg(long)]
    pub n: Option<usize>,

    /// Unitary to decompose into two-level gates (JSON matrix).
    #[arg(long)]
    pub unitary: Option<PathBuf>,

    /// Write the gate list (JSON) here.
    #[arg(long, requires = "unitary")]
    pub out: Option<PathBuf>,

    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
}
