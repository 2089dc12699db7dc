use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use eprb_core::{CorrelationMode, DetectionDensity, Error, GridMode, Method, TheoryConfig};

#[derive(Parser)]
#[command(
    name = "eprb",
    version,
    about = "Numerical laboratory for probabilistic-detection local hidden variable models",
    propagate_version = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Compute a correlation/rate curve and write CSV or JSON (plus SVG)
    Sweep(SweepArgs),
    /// Evaluate the three-angle Bell inequality, or scan all grid triples
    Bell(BellArgs),
    /// Cross-check the computation paths for a theory
    Verify(VerifyArgs),
    /// Deviation statistics of a theory against the quantum reference
    Stats(StatsArgs),
    /// Accuracy-vs-rate-variation frontier of the cos^p density family
    Tradeoff(TradeoffArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TheoryArg {
    /// Deterministic sign-projection toy model
    Naive,
    /// Cosine projection density (closed forms available)
    Proj,
    /// Signed-power cosine density cos^(1/e)
    Pow,
    /// cos^p with a caller-chosen exponent
    Custom,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Corr,
    Anticorr,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GridArg {
    Paper,
    Full,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Closed,
    Quad,
    Dft,
    Mc,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
}

#[derive(Args)]
pub struct CommonArgs {
    /// Detection model
    #[arg(long, value_enum, default_value = "proj")]
    pub theory: TheoryArg,

    /// Density exponent p for pow (default 1/e) and custom (required)
    #[arg(long)]
    pub exponent: Option<f64>,

    /// Source correlation; defaults to the theory's native convention
    /// (anticorr for naive/proj, corr for pow/custom)
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,

    /// Hidden-variable integration nodes
    #[arg(long, default_value_t = 50)]
    pub theta_points: usize,

    /// Analyzer-separation sample points
    #[arg(long, default_value_t = 50)]
    pub phi_points: usize,

    /// Quadrature grid; defaults to paper (full for custom densities).
    /// paper: half-interval theta nodes doubled by symmetry, half-open phi
    /// grid; full: full-period theta nodes, inclusive phi grid [0, pi]
    #[arg(long, value_enum)]
    pub grid: Option<GridArg>,

    /// Monte Carlo pairs per angle
    #[arg(long, default_value_t = 1_000_000)]
    pub pairs: u64,

    /// Monte Carlo seed
    #[arg(long, default_value_t = 42)]
    pub seed: u64,

    #[arg(long, value_enum, default_value = "csv")]
    pub format: FormatArg,

    /// Output file (stdout when omitted); file outputs get a
    /// <path>.manifest.json provenance sidecar
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Also write a static SVG plot to this path
    #[arg(long)]
    pub plot: Option<PathBuf>,

    /// Angle-valued inputs (--angles, --step) are degrees; this flag
    /// states it explicitly. CSV/JSON output is always radians
    #[arg(long)]
    pub degrees: bool,
}

#[derive(Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: CommonArgs,

    /// Computation path (default quad). dft emits theta-points rows over
    /// the full period; other methods emit phi-points rows on [0, pi]
    #[arg(long, value_enum)]
    pub method: Option<MethodArg>,
}

#[derive(Args)]
pub struct BellArgs {
    #[command(flatten)]
    pub common: CommonArgs,

    /// Three comma-separated analyzer angles in degrees, e.g. 0,60,120
    #[arg(long)]
    pub angles: Option<String>,

    /// Scan every ordered angle triple on a grid instead
    #[arg(long)]
    pub scan: bool,

    /// Scan grid step in degrees (must divide 180)
    #[arg(long, default_value_t = 2.0)]
    pub step: f64,

    /// How many of the strongest triples to report from a scan
    #[arg(long, default_value_t = 10)]
    pub top: usize,

    /// Computation path for the expectation (default closed for
    /// naive/proj, quad otherwise; dft is not meaningful here)
    #[arg(long, value_enum)]
    pub method: Option<MethodArg>,
}

#[derive(Args)]
pub struct VerifyArgs {
    /// Detection model
    #[arg(long, value_enum, default_value = "proj")]
    pub theory: TheoryArg,

    /// Density exponent p for pow (default 1/e) and custom (required)
    #[arg(long)]
    pub exponent: Option<f64>,

    /// Source correlation; defaults to the theory's native convention
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,

    /// Node count for the quad/dft comparison
    #[arg(long, default_value_t = 256)]
    pub theta_points: usize,

    /// Monte Carlo pairs per checked angle
    #[arg(long, default_value_t = 1_000_000)]
    pub pairs: u64,

    #[arg(long, default_value_t = 42)]
    pub seed: u64,

    /// Output file for the JSON report (stdout when omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct StatsArgs {
    #[command(flatten)]
    pub common: CommonArgs,

    /// Computation path (default closed for naive/proj, quad otherwise)
    #[arg(long, value_enum)]
    pub method: Option<MethodArg>,
}

#[derive(Args)]
pub struct TradeoffArgs {
    #[command(flatten)]
    pub common: CommonArgs,

    /// Exponents as start:end:step (inclusive) or a comma list
    #[arg(long)]
    pub exponents: String,
}

/// Failure carrying the process exit code.
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: 2,
            message: message.into(),
        }
    }

    pub fn verification(message: impl Into<String>) -> Self {
        CliError {
            code: 5,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        let code = match err {
            Error::DegenerateRate { .. } => 3,
            Error::ZeroCoincidence { .. } => 4,
            _ => 2,
        };
        CliError {
            code,
            message: err.to_string(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError {
            code: 2,
            message: format!("io: {err}"),
        }
    }
}

/// Resolved run parameters shared by the subcommands.
pub struct Resolved {
    pub config: TheoryConfig,
    pub has_closed_form: bool,
}

pub fn resolve(common: &CommonArgs) -> Result<Resolved, CliError> {
    let density = build_density(common.theory, common.exponent)?;
    let mode = match common.mode {
        Some(ModeArg::Corr) => CorrelationMode::Correlated,
        Some(ModeArg::Anticorr) => CorrelationMode::Anticorrelated,
        None => native_mode(common.theory),
    };
    let grid_mode = match common.grid {
        Some(GridArg::Paper) => GridMode::PaperHalfInterval,
        Some(GridArg::Full) => GridMode::FullPeriod,
        None if common.theory == TheoryArg::Custom => GridMode::FullPeriod,
        None => GridMode::PaperHalfInterval,
    };
    let config = TheoryConfig {
        density,
        mode,
        theta_points: common.theta_points,
        phi_points: common.phi_points,
        grid_mode,
        seed: common.seed,
        pairs_per_angle: common.pairs,
    };
    config.validate()?;
    Ok(Resolved {
        config,
        has_closed_form: matches!(common.theory, TheoryArg::Naive | TheoryArg::Proj),
    })
}

pub fn build_density(
    theory: TheoryArg,
    exponent: Option<f64>,
) -> Result<DetectionDensity, CliError> {
    let density = match theory {
        TheoryArg::Naive => DetectionDensity::naive(),
        TheoryArg::Proj => DetectionDensity::projection(),
        TheoryArg::Pow => match exponent {
            None => DetectionDensity::signed_power(),
            Some(p) => DetectionDensity::SignedPowerCosine { exponent: p },
        },
        TheoryArg::Custom => {
            let p = exponent
                .ok_or_else(|| CliError::usage("--theory custom requires --exponent"))?;
            DetectionDensity::Custom { exponent: p }
        }
    };
    density.validate()?;
    Ok(density)
}

pub fn native_mode(theory: TheoryArg) -> CorrelationMode {
    match theory {
        TheoryArg::Naive | TheoryArg::Proj => CorrelationMode::Anticorrelated,
        TheoryArg::Pow | TheoryArg::Custom => CorrelationMode::Correlated,
    }
}

pub fn to_method(arg: MethodArg) -> Method {
    match arg {
        MethodArg::Closed => Method::Closed,
        MethodArg::Quad => Method::Quad,
        MethodArg::Dft => Method::Dft,
        MethodArg::Mc => Method::Mc,
    }
}

pub fn default_method(has_closed_form: bool) -> Method {
    if has_closed_form {
        Method::Closed
    } else {
        Method::Quad
    }
}
