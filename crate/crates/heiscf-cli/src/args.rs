//! Command-line interface definition.

use clap::{Parser, Subcommand, ValueEnum};
use heiscf::lattice::DomainKind;
use std::fmt;
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "heiscf",
    version,
    about = "Continued fractions on the Heisenberg group: exact expansion, \
             certified reconstruction, and digit dynamics"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Expand a point into its continued-fraction digits (digits.json)
    Expand(ExpandArgs),
    /// Rebuild the exact point encoded by a digit file
    Reconstruct(ReconstructArgs),
    /// Check matrix invariants and error certificates of a digit file
    Verify(VerifyArgs),
    /// Evaluate an infinite continued fraction with a certified error bound
    Pringsheim(PringsheimArgs),
    /// Record a Gauss-map orbit as CSV (orbit.csv)
    Orbit(OrbitArgs),
    /// Accumulate the empirical measure of an orbit (histogram.csv)
    Measure(MeasureArgs),
    /// Digit frequencies and denominator growth along an orbit
    Stats(StatsArgs),
    /// Probe a cylinder set: branch image, diameter, coverage
    Cylinder(CylinderArgs),
}

/// Fundamental domain of the digit lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DomainArg {
    /// Unit cube centered at the identity
    Cube,
    /// Dirichlet domain for the lattice action
    Dirichlet,
}

impl DomainArg {
    pub fn kind(self) -> DomainKind {
        match self {
            DomainArg::Cube => DomainKind::Cube,
            DomainArg::Dirichlet => DomainKind::Dirichlet,
        }
    }
}

impl fmt::Display for DomainArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DomainArg::Cube => "cube",
            DomainArg::Dirichlet => "dirichlet",
        })
    }
}

#[derive(clap::Args)]
pub struct ExpandArgs {
    /// Point to expand: `x,y,t`, coordinates rational (`3/4`, `0.25`) or
    /// named (`pi-3`, `e-3`, `sqrt2-1`)
    #[arg(long, allow_hyphen_values = true)]
    pub point: String,
    #[arg(long, value_enum, default_value_t = DomainArg::Cube)]
    pub domain: DomainArg,
    /// Stop after this many digits
    #[arg(long, default_value_t = 4096)]
    pub max_digits: usize,
    /// Working precision for named constants (bits)
    #[arg(long, default_value_t = 256)]
    pub bits: usize,
    #[arg(long, default_value = "digits.json")]
    pub out: PathBuf,
    #[arg(long, default_value = "manifest.json")]
    pub manifest_out: PathBuf,
}

#[derive(clap::Args)]
pub struct ReconstructArgs {
    /// Digit file produced by `expand`
    #[arg(long)]
    pub digits: PathBuf,
}

#[derive(clap::Args)]
pub struct VerifyArgs {
    /// Digit file to verify
    #[arg(long)]
    pub digits: PathBuf,
    /// Domain override (defaults to the file's manifest, then cube)
    #[arg(long, value_enum)]
    pub domain: Option<DomainArg>,
    /// Exact point to verify the digits against (rational coordinates)
    #[arg(long, allow_hyphen_values = true)]
    pub point: Option<String>,
}

#[derive(clap::Args)]
pub struct PringsheimArgs {
    /// Digit file whose fractional digits form the stream
    #[arg(long)]
    pub digits: Option<PathBuf>,
    /// Constant digit `x,y,t` repeated `--steps` times
    #[arg(long, allow_hyphen_values = true)]
    pub constant: Option<String>,
    /// Stream length when using `--constant`
    #[arg(long, default_value_t = 64)]
    pub steps: usize,
    /// Target fourth-power distance, as an exact rational
    #[arg(long, default_value = "1/10000000000000000000000000000000000000000", allow_hyphen_values = true)]
    pub tol4: String,
    /// Require digit gauge strictly greater than 3 (open-condition variant)
    #[arg(long)]
    pub strict: bool,
    /// Optional JSON report
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(clap::Args)]
pub struct OrbitArgs {
    /// Seed point `x,y,t` (rational or named coordinates)
    #[arg(long, allow_hyphen_values = true)]
    pub seed: String,
    #[arg(long, value_enum, default_value_t = DomainArg::Cube)]
    pub domain: DomainArg,
    /// Gauss-map steps to record
    #[arg(long, default_value_t = 1000)]
    pub steps: usize,
    /// Seed evaluation precision (bits)
    #[arg(long, default_value_t = 256)]
    pub bits: usize,
    #[arg(long, default_value = "orbit.csv")]
    pub out: PathBuf,
    #[arg(long, default_value = "manifest.json")]
    pub manifest_out: PathBuf,
}

#[derive(clap::Args)]
pub struct MeasureArgs {
    /// Seed point `x,y,t` (rational or named coordinates)
    #[arg(long, default_value = "pi-3,e-3,0", allow_hyphen_values = true)]
    pub seed: String,
    #[arg(long, value_enum, default_value_t = DomainArg::Cube)]
    pub domain: DomainArg,
    #[arg(long, default_value_t = 1_000_000)]
    pub steps: usize,
    /// Seed evaluation precision (bits)
    #[arg(long, default_value_t = 256)]
    pub bits: usize,
    /// Histogram resolution `nx,ny,nt` (each at least 1)
    #[arg(long, default_value = "8,8,8")]
    pub grid: String,
    #[arg(long, default_value = "histogram.csv")]
    pub out: PathBuf,
    #[arg(long, default_value = "summary.json")]
    pub summary: PathBuf,
    /// Also run a second seed and report the total-variation distance
    #[arg(long)]
    pub stability: bool,
    /// Second seed for `--stability`
    #[arg(long, default_value = "e-3,pi-3,sqrt2-1", allow_hyphen_values = true)]
    pub seed2: String,
    #[arg(long, default_value = "manifest.json")]
    pub manifest_out: PathBuf,
}

#[derive(clap::Args)]
pub struct StatsArgs {
    /// Seed point `x,y,t` (rational or named coordinates)
    #[arg(long, allow_hyphen_values = true)]
    pub seed: String,
    #[arg(long, value_enum, default_value_t = DomainArg::Cube)]
    pub domain: DomainArg,
    /// Seed evaluation precision (bits)
    #[arg(long, default_value_t = 256)]
    pub bits: usize,
    /// Cap on the certified digit prefix
    #[arg(long, default_value_t = 4096)]
    pub max_digits: usize,
    /// Optional JSON report
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// How many top digits to print
    #[arg(long, default_value_t = 10)]
    pub top: usize,
}

#[derive(clap::Args)]
pub struct CylinderArgs {
    /// Digit word `x,y,t;x,y,t;…` of nonzero lattice points
    #[arg(long, allow_hyphen_values = true)]
    pub word: String,
    #[arg(long, value_enum, default_value_t = DomainArg::Cube)]
    pub domain: DomainArg,
    /// Sample points drawn in the domain box
    #[arg(long, default_value_t = 20_000)]
    pub samples: usize,
    /// Coverage grid resolution per axis
    #[arg(long, default_value_t = 4)]
    pub grid: usize,
    /// Deterministic sampling seed
    #[arg(long, default_value_t = 0)]
    pub rng_seed: u64,
    /// Also map this exact in-domain point through the branch
    #[arg(long, allow_hyphen_values = true)]
    pub apply: Option<String>,
    /// Optional JSON report
    #[arg(long)]
    pub out: Option<PathBuf>,
}
