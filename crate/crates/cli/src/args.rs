use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Clone, Parser)]
#[command(name = "preserver-lab", version, about = "Entrywise positivity preservers in fixed dimension")]
pub struct Cli {
    /// Master seed for every sampled quantity.
    #[arg(long, global = true, env = "PRESERVER_LAB_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Evaluate a Schur polynomial and compare engines.
    Schur(SchurArgs),
    /// Negative-coefficient thresholds.
    Threshold(ThresholdArgs),
    /// Certify or falsify a power sum as a preserver.
    Certify(CertifyArgs),
    /// Construct a preserver with a prescribed sign pattern and certify it.
    SignSeries(SignSeriesArgs),
    /// Monte Carlo HCIZ integral against the closed form.
    Hciz(HcizArgs),
    /// Weak majorization and the determinant-ratio criterion.
    Majorize(MajorizeArgs),
    /// Total non-negativity of a Hankel matrix.
    Tn(TnArgs),
    /// Log-supermodularity of minors of a totally positive matrix.
    Logsup(LogsupArgs),
    /// Explicit counterexamples.
    Counterexample(CounterexampleArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Engine {
    Tableaux,
    Bialternant,
    Both,
}

#[derive(Debug, Clone, Args)]
pub struct SchurArgs {
    /// Strictly increasing exponents.
    #[arg(short = 'n', long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub n: Vec<String>,
    /// Evaluation point; integers, decimals or p/q.
    #[arg(short = 'u', long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub u: Vec<String>,
    #[arg(long, value_enum, default_value_t = Engine::Both)]
    pub engine: Engine,
    /// Largest number of tableaux enumerated.
    #[arg(long, default_value_t = preserver_core::symfun::DEFAULT_TABLEAU_CAP)]
    pub cap: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Variant {
    Integer,
    RealRank1,
    RealFull,
    TwoSided,
}

#[derive(Debug, Clone, Args)]
#[command(group = clap::ArgGroup::new("kind").required(true).args(["sharp", "qualitative", "rank1", "rayleigh", "geometric", "cube", "cube_scan"]))]
pub struct ThresholdArgs {
    /// The sharp rank-one threshold.
    #[arg(long)]
    pub sharp: bool,
    /// One of the explicit full-rank thresholds.
    #[arg(long, value_enum)]
    pub qualitative: Option<Variant>,
    /// The rank-one threshold at the point given by `-u`.
    #[arg(long)]
    pub rank1: bool,
    /// The threshold for the single matrix in this CSV file.
    #[arg(long, value_name = "CSV")]
    pub rayleigh: Option<PathBuf>,
    /// Series threshold for the tail `amplitude·ratio^M`.
    #[arg(long, value_name = "AMPLITUDE,RATIO", value_delimiter = ',')]
    pub geometric: Option<Vec<f64>>,
    /// Bounds on the matrix-cube half-width for the offsets `--alpha`.
    #[arg(long)]
    pub cube: bool,
    /// Ratio of the cube bounds for `n_j = j` over `--dims`.
    #[arg(long)]
    pub cube_scan: bool,
    /// Dimension; must match the length of `-n` when both are given.
    #[arg(short = 'N', long = "dim")]
    pub dim: Option<usize>,
    #[arg(short = 'n', long, value_delimiter = ',')]
    pub n: Vec<f64>,
    /// Positive coefficients; all ones when omitted.
    #[arg(short = 'c', long, value_delimiter = ',')]
    pub c: Vec<f64>,
    /// Exponent of the negative term.
    #[arg(short = 'M', long = "power")]
    pub m: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub rho: f64,
    #[arg(short = 'u', long, value_delimiter = ',')]
    pub u: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    pub alpha: Vec<f64>,
    /// First and last dimension of the cube scan.
    #[arg(long, value_name = "FIRST,LAST", value_delimiter = ',', default_values_t = [3, 40])]
    pub dims: Vec<usize>,
}

#[derive(Debug, Clone, Args)]
#[command(group = clap::ArgGroup::new("domain").args(["rho", "unbounded", "two_sided"]))]
pub struct DomainArgs {
    /// Entries in (0, rho).
    #[arg(long)]
    pub rho: Option<f64>,
    /// Entries in (0, ∞).
    #[arg(long)]
    pub unbounded: bool,
    /// Entries in (−rho, rho).
    #[arg(long, value_name = "RHO")]
    pub two_sided: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct CertifyArgs {
    /// Power sum such as `1 + x - 0.21*x^2`.
    #[arg(short = 'f', long, allow_hyphen_values = true)]
    pub function: String,
    #[arg(short = 'N', long = "dim")]
    pub dim: usize,
    #[command(flatten)]
    pub domain: DomainArgs,
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    /// Ranks of the sampled matrices; all of 1..=N when omitted.
    #[arg(long, value_delimiter = ',')]
    pub ranks: Vec<usize>,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
}

#[derive(Debug, Clone, Args)]
pub struct SignSeriesArgs {
    /// Exponents carrying the positive base coefficients.
    #[arg(long, value_delimiter = ',', required = true)]
    pub base: Vec<u64>,
    #[arg(short = 'c', long, value_delimiter = ',')]
    pub c: Vec<f64>,
    /// Prescribed signs as `M:s` with s in {-1, 0, 1}, e.g. `2:-1,3:1`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub tail: Vec<String>,
    /// Entries in (0, rho).
    #[arg(long)]
    pub rho: Option<f64>,
    /// Entries in (0, ∞).
    #[arg(long, conflicts_with = "rho")]
    pub unbounded: bool,
    /// Largest exponent of the truncated series.
    #[arg(long)]
    pub m_max: Option<u64>,
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
}

#[derive(Debug, Clone, Args)]
pub struct HcizArgs {
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub alpha: Vec<f64>,
    #[arg(short = 'x', long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub x: Vec<f64>,
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    /// Also check the generalized Vandermonde sandwich at this point.
    #[arg(short = 'u', long, value_delimiter = ',')]
    pub u: Vec<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct MajorizeArgs {
    #[arg(short = 'm', long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub m: Vec<f64>,
    #[arg(short = 'n', long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub n: Vec<f64>,
    /// Compare the normalized determinants at this point.
    #[arg(short = 'u', long, value_delimiter = ',')]
    pub u: Vec<f64>,
    /// Search for a point where the determinant comparison fails.
    #[arg(long)]
    pub search: bool,
    #[arg(long, default_value_t = preserver_core::order::DEFAULT_BUDGET)]
    pub budget: usize,
}

#[derive(Debug, Clone, Args)]
#[command(group = clap::ArgGroup::new("source").required(true).args(["moments", "moments_file"]))]
pub struct TnArgs {
    /// Moments s_0, …, s_{2N−2}.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub moments: Vec<f64>,
    /// Single CSV line of moments.
    #[arg(long)]
    pub moments_file: Option<PathBuf>,
    #[arg(long, default_value_t = preserver_core::matrix::DEFAULT_PSD_TOL)]
    pub tol: f64,
}

#[derive(Debug, Clone, Args)]
#[command(group = clap::ArgGroup::new("source").required(true).args(["matrix", "vandermonde_u"]))]
pub struct LogsupArgs {
    /// Strictly totally positive matrix as CSV.
    #[arg(long)]
    pub matrix: Option<PathBuf>,
    /// Rows of the generalized Vandermonde matrix `u_i^{n_j}`.
    #[arg(long, value_delimiter = ',', requires = "vandermonde_n")]
    pub vandermonde_u: Vec<String>,
    /// Columns of the generalized Vandermonde matrix.
    #[arg(long, value_delimiter = ',')]
    pub vandermonde_n: Vec<String>,
    /// Evaluate in exact arithmetic (integral exponents only).
    #[arg(long, requires = "vandermonde_u")]
    pub exact: bool,
    /// 1-based row tuples.
    #[arg(long, value_delimiter = ',', required = true)]
    pub i1: Vec<usize>,
    #[arg(long, value_delimiter = ',', required = true)]
    pub i2: Vec<usize>,
    /// 1-based column tuples.
    #[arg(long, value_delimiter = ',', required = true)]
    pub j1: Vec<usize>,
    #[arg(long, value_delimiter = ',', required = true)]
    pub j2: Vec<usize>,
    /// Relative tolerance on the residual.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
}

#[derive(Debug, Clone, Args)]
#[command(group = clap::ArgGroup::new("kind").required(true).args(["two_sided", "complex"]))]
pub struct CounterexampleArgs {
    /// `t(1 + x² + … + x^{2k}) − x^{2k+1}` on a 2×2 matrix with entries ±rho/2.
    #[arg(long)]
    pub two_sided: bool,
    /// A complex rank-one matrix on which `x^M` leaves the span of the base powers.
    #[arg(long)]
    pub complex: bool,
    #[arg(short = 'k', long, default_value_t = 1)]
    pub k: u32,
    #[arg(short = 't', long, default_value_t = 1.0)]
    pub t: f64,
    #[arg(short = 'n', long, value_delimiter = ',')]
    pub n: Vec<u64>,
    #[arg(long, default_value_t = 1.0)]
    pub rho: f64,
}
