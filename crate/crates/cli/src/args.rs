use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Spin-basis transforms and separability certificates for qudit densities.
#[derive(Debug, Parser)]
#[command(name = "spinsep", version)]
pub struct Cli {
    /// Absolute tolerance for density validation and verdicts.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,

    /// Entrywise tolerance when checking that a decomposition reproduces its target.
    #[arg(long, global = true, default_value_t = 1e-8)]
    pub recon_tol: f64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List spin matrices S_{j,k} for one qudit or a composite system.
    Basis(BasisArgs),
    /// Convert between a matrix file and its spin coefficient table.
    Transform(TransformArgs),
    /// Run separability certificates on a density file.
    Certify(CertifyArgs),
    /// Build a Werner density, report its threshold, and emit a separable decomposition.
    Werner(WernerArgs),
    /// Reorder the subsystems of a density file.
    Permute(PermuteArgs),
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false, id = "system")]
pub struct SystemArg {
    /// Single-qudit dimension.
    #[arg(long)]
    pub d: Option<usize>,
    /// Comma-separated local dimensions, e.g. 2,3.
    #[arg(long, value_delimiter = ',')]
    pub dims: Option<Vec<usize>>,
}

#[derive(Debug, Args)]
pub struct BasisArgs {
    #[command(flatten)]
    pub system: SystemArg,
    /// Only this label, as J,K. For several subsystems separate digits with
    /// dots, e.g. 1.0,0.2 for j = (1,0), k = (0,2).
    #[arg(long)]
    pub label: Option<String>,
    /// Write the basis document here instead of standard output.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Direction {
    /// Density/matrix file to spin coefficient file.
    ToSpin,
    /// Spin coefficient file to matrix file.
    FromSpin,
}

#[derive(Debug, Args)]
pub struct TransformArgs {
    #[arg(long, short)]
    pub input: PathBuf,
    /// Defaults to the direction implied by the input's `kind`.
    #[arg(long)]
    pub direction: Option<Direction>,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// Require the matrix side to be a valid density (exit code 4 otherwise).
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Text,
    Json,
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    #[arg(long, short)]
    pub input: PathBuf,
    /// Diagonal/off-diagonal necessary condition.
    #[arg(long)]
    pub necessary: bool,
    /// Partial-transpose positivity.
    #[arg(long)]
    pub peres: bool,
    /// Spin L1-norm sufficient condition with explicit decomposition.
    #[arg(long)]
    pub sufficient: bool,
    /// All three checks (the default when none is selected).
    #[arg(long)]
    pub all: bool,
    /// Subsystem (1-based) for --peres; every subsystem when omitted.
    #[arg(long)]
    pub subsystem: Option<usize>,
    /// Write the decomposition of a certified-separable input to PATH. Without
    /// PATH the decomposition goes to standard output and the report to
    /// standard error.
    #[arg(long, value_name = "PATH", num_args = 0..=1)]
    pub emit_decomposition: Option<Option<PathBuf>>,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    pub format: ReportFormat,
}

#[derive(Debug, Args)]
pub struct WernerArgs {
    /// Local dimension.
    #[arg(long)]
    pub p: usize,
    /// Number of subsystems.
    #[arg(long)]
    pub n: usize,
    /// Mixing parameter; defaults to the threshold when p is prime.
    #[arg(long)]
    pub s: Option<f64>,
    /// Write W(s) as a density file.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// Write a verified separable decomposition of W(s) (requires prime p and
    /// s at or below the threshold). Without PATH the decomposition goes to
    /// standard output and the report to standard error.
    #[arg(long, value_name = "PATH", num_args = 0..=1)]
    pub emit_decomposition: Option<Option<PathBuf>>,
}

#[derive(Debug, Args)]
pub struct PermuteArgs {
    #[arg(long, short)]
    pub input: PathBuf,
    /// 1-based images sigma(1),...,sigma(b): output slot a holds input subsystem sigma(a).
    #[arg(long, value_delimiter = ',', required = true)]
    pub sigma: Vec<usize>,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// Require the input to be a valid density (exit code 4 otherwise).
    #[arg(long)]
    pub strict: bool,
}
