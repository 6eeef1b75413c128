use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use posmap::BasisKind;

/// Analyze linear maps on d×d complex matrices.
///
/// Inputs and outputs are JSON. Pass `-` as a path to read stdin. The
/// `POSMAP_ATOL` environment variable overrides the default tolerance.
#[derive(Debug, Parser)]
#[command(name = "posmap", version)]
pub struct Cli {
    /// Print human-readable tables to stderr.
    #[arg(long, short, global = true)]
    pub verbose: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Convert a map to another representation.
    Convert(ConvertArgs),
    /// Run positivity, unitality and symmetry checks on a map.
    Check(CheckArgs),
    /// Sorted spectrum of a map with the Perron-Frobenius bound.
    Spectrum(MapArg),
    /// Bi-orthonormal eigen-decomposition of a map.
    Decompose(DecomposeArgs),
    /// Build a named map.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Test a state for membership in a state class.
    Member(MemberArgs),
    /// Construct a separating witness for a state outside a class.
    Witness(WitnessArgs),
    /// Worked examples.
    #[command(subcommand)]
    Demo(DemoCommand),
}

#[derive(Debug, Args)]
pub struct MapArg {
    /// Map JSON file.
    pub map: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Target {
    Transfer,
    Choi,
    Aform,
    Kraus,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum BasisArg {
    MatrixUnits,
    FourierDiagonalPlusOffdiag,
    GellMannWithIdentity,
}

impl From<BasisArg> for BasisKind {
    fn from(b: BasisArg) -> Self {
        match b {
            BasisArg::MatrixUnits => BasisKind::MatrixUnits,
            BasisArg::FourierDiagonalPlusOffdiag => BasisKind::FourierDiagonalPlusOffdiag,
            BasisArg::GellMannWithIdentity => BasisKind::GellMannWithIdentity,
        }
    }
}

#[derive(Debug, Args)]
pub struct ConvertArgs {
    #[arg(long, value_enum)]
    pub to: Target,
    /// Basis for `--to transfer` and `--to aform`.
    #[arg(long, value_enum, default_value = "matrix-units")]
    pub basis: BasisArg,
    pub map: PathBuf,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    /// Complete positivity via the Choi spectrum.
    #[arg(long)]
    pub cp: bool,
    /// Complete copositivity (CP after transposition).
    #[arg(long)]
    pub ccp: bool,
    #[arg(long)]
    pub unital: bool,
    /// Trace preservation.
    #[arg(long)]
    pub tp: bool,
    /// Hermiticity preservation (Hermitian Choi matrix).
    #[arg(long)]
    pub selfadjoint: bool,
    /// Search N random pure states for a positivity counterexample.
    #[arg(long, value_name = "N")]
    pub positive_sample: Option<usize>,
    /// Seed for `--positive-sample`.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    pub map: PathBuf,
}

impl CheckArgs {
    /// No selection flag means every boolean check.
    pub fn all_selected(&self) -> bool {
        !(self.cp
            || self.ccp
            || self.unital
            || self.tp
            || self.selfadjoint
            || self.positive_sample.is_some())
    }
}

#[derive(Debug, Args)]
pub struct DecomposeArgs {
    #[arg(long, required = true)]
    pub biorth: bool,
    /// Largest accepted eigenvector condition number.
    #[arg(long, default_value_t = posmap::analysis::DEFAULT_COND_MAX)]
    pub cond_max: f64,
    pub map: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum GenCommand {
    /// Twirl onto the Werner states of C^N ⊗ C^N.
    Werner { n: usize },
    /// Twirl onto the isotropic states of C^N ⊗ C^N.
    Isotropic { n: usize },
    /// Pinching by the projectors in a JSON list of matrices.
    Pinching { projectors: PathBuf },
    /// Map whose image is the purity ball in dimension D.
    Ball { d: usize },
    /// Circulant-plus-Schur example map.
    Example {
        /// Circulant weights a0,a1,...
        #[arg(
            long,
            value_delimiter = ',',
            allow_negative_numbers = true,
            required = true
        )]
        alpha: Vec<f64>,
        /// Matrix JSON for the Schur multiplier.
        #[arg(long)]
        beta: PathBuf,
    },
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("class").required(true).args(["ball", "projection"])))]
pub struct MemberArgs {
    /// Purity ball in dimension D.
    #[arg(long, value_name = "D")]
    pub ball: Option<usize>,
    /// Fixed-point set of the projection map in this JSON file.
    #[arg(long, value_name = "MAP")]
    pub projection: Option<PathBuf>,
    /// State JSON file.
    pub state: PathBuf,
}

#[derive(Debug, Args)]
pub struct WitnessArgs {
    /// Purity ball in dimension D.
    #[arg(long, value_name = "D", required = true)]
    pub ball: usize,
    /// Number of ball states the witness is checked against.
    #[arg(long, default_value_t = posmap::stateclasses::DEFAULT_BALL_SAMPLES)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    pub state: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum DemoCommand {
    /// Predicted against computed eigenvalues for a random example map.
    ExampleMap {
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}
