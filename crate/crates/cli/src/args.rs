use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

/// Theta functions as a dynamical system: evaluation, integration, audits and band charts.
#[derive(Debug, Parser)]
#[command(
    name = "thetaflow",
    version,
    subcommand_required = true,
    arg_required_else_help = true
)]
pub struct Cli {
    /// INI file of flag defaults ([common] or [<subcommand>] sections); flags on the command line win
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Tabulate θ₁…θ₄ and θ₁′ from the series along real t
    #[command(args_override_self = true)]
    ThetaEval(ThetaEvalArgs),
    /// Integrate the theta system or one of its polynomial reductions
    #[command(args_override_self = true)]
    Integrate(IntegrateArgs),
    /// Audit trajectory invariants and the theta/polynomial conjugacy
    #[command(args_override_self = true)]
    Invariants(InvariantsArgs),
    /// Audit the quadratic bracket: antisymmetry, flow, determinant, Jacobi identity
    #[command(args_override_self = true)]
    BracketCheck(BracketCheckArgs),
    /// Audit the operator commutator table and Heisenberg equations
    #[command(args_override_self = true)]
    QuantizeCheck(QuantizeCheckArgs),
    /// Audit closed-form Legendre partials against finite differences
    #[command(args_override_self = true)]
    LegendreCheck(LegendreCheckArgs),
    /// Band edges and lacunae of the Mathieu operator over an amplitude grid
    #[command(args_override_self = true)]
    MathieuBands(MathieuBandsArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Self::ThetaEval(_) => "theta-eval",
            Self::Integrate(_) => "integrate",
            Self::Invariants(_) => "invariants",
            Self::BracketCheck(_) => "bracket-check",
            Self::QuantizeCheck(_) => "quantize-check",
            Self::LegendreCheck(_) => "legendre-check",
            Self::MathieuBands(_) => "mathieu-bands",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Self::Csv => "csv",
            Self::Json => "json",
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output file [default: $THETAFLOW_OUT_DIR/<name>.<format> when the variable is set]
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct ReportArgs {
    /// Also write the audit results as JSON
    #[arg(long, value_name = "PATH")]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ThetaEvalArgs {
    /// Lattice parameter τ, e.g. i or 0.1+0.8i
    #[arg(long, default_value = "i", allow_hyphen_values = true)]
    pub tau: Complex64,
    #[arg(long, default_value_t = 0.1, allow_hyphen_values = true)]
    pub t_min: f64,
    #[arg(long, default_value_t = 0.99, allow_hyphen_values = true)]
    pub t_max: f64,
    /// Number of sample points
    #[arg(long, default_value_t = 90)]
    pub t_steps: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum System {
    Theta,
    Poly4,
    Poly5,
}

#[derive(Debug, Clone, Args)]
pub struct IntegrateArgs {
    #[arg(long, value_enum, default_value = "poly4")]
    pub system: System,
    /// Lattice parameter τ; the initial state comes from the series at t0 unless --init is given
    #[arg(long, default_value = "i", allow_hyphen_values = true)]
    pub tau: Complex64,
    /// Comma-separated complex initial state (x,y,z,xi[,u]) for the polynomial systems
    #[arg(long, allow_hyphen_values = true)]
    pub init: Option<String>,
    #[arg(long, default_value_t = 0.1, allow_hyphen_values = true)]
    pub t0: f64,
    #[arg(long, default_value_t = 0.9, allow_hyphen_values = true)]
    pub t1: f64,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Dense-output sample count; 0 writes the accepted steps
    #[arg(long, default_value_t = 0)]
    pub samples: usize,
    #[arg(long, default_value_t = 100_000)]
    pub max_steps: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct InvariantsArgs {
    #[arg(long, default_value = "i", allow_hyphen_values = true)]
    pub tau: Complex64,
    #[arg(long, default_value_t = 0.1, allow_hyphen_values = true)]
    pub t0: f64,
    /// End time; clipped before the next zero of θ₁ (integer t)
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub t1: f64,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Comparison points along the trajectory
    #[arg(long, default_value_t = 21)]
    pub samples: usize,
    #[command(flatten)]
    pub report: ReportArgs,
}

#[derive(Debug, Clone, Args)]
pub struct BracketCheckArgs {
    /// Random points per check
    #[arg(long, default_value_t = 100)]
    pub points: usize,
    #[arg(long, default_value_t = 5)]
    pub seed: u64,
    /// Bound on Jacobi-identity residuals
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[command(flatten)]
    pub report: ReportArgs,
}

#[derive(Debug, Clone, Args)]
pub struct QuantizeCheckArgs {
    /// Smallest truncation degree
    #[arg(long, default_value_t = 4)]
    pub d_min: u32,
    /// Largest truncation degree
    #[arg(long, default_value_t = 12)]
    pub d_max: u32,
    #[command(flatten)]
    pub report: ReportArgs,
}

#[derive(Debug, Clone, Args)]
pub struct LegendreCheckArgs {
    /// Random (x, k, α) points
    #[arg(long, default_value_t = 20)]
    pub samples: usize,
    #[arg(long, default_value_t = 9)]
    pub seed: u64,
    /// Finite-difference step
    #[arg(long, default_value_t = 1e-3)]
    pub h: f64,
    #[arg(long, default_value_t = 1e-6)]
    pub rel_tol: f64,
    #[arg(long, default_value_t = 1e-8)]
    pub compat_tol: f64,
    #[command(flatten)]
    pub report: ReportArgs,
}

#[derive(Debug, Clone, Args)]
pub struct MathieuBandsArgs {
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub a_min: f64,
    #[arg(long, default_value_t = 5.0, allow_hyphen_values = true)]
    pub a_max: f64,
    /// Grid points in A, endpoints included
    #[arg(long, default_value_t = 51)]
    pub a_steps: usize,
    #[arg(long, default_value_t = 25.0)]
    pub e_max: f64,
    /// Fourier modes per symmetry class
    #[arg(long, default_value_t = 32)]
    pub m: usize,
    /// Worker threads for the grid; 0 uses every core
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}
