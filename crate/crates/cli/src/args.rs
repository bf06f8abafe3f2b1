use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "kszforms",
    version,
    about = "Random unimodular multilinear forms, their norms and Hardy-Littlewood exponents"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the constants of the random sign construction.
    #[command(long_about = CONSTANTS_HELP)]
    Constants(ConstantsArgs),
    /// Draw a sign tensor with certified small norm.
    #[command(long_about = SAMPLE_HELP)]
    Sample(SampleArgs),
    /// Bracket the norm of a sign tensor read from a JSON file.
    #[command(long_about = NORM_HELP)]
    Norm(NormArgs),
    /// Compare exact norms of unimodular forms with the growth function f.
    #[command(long_about = WINDOW_HELP)]
    Window(WindowArgs),
    /// Check Hardy-Littlewood admissibility and the blow-up exponent.
    #[command(long_about = HL_HELP)]
    Hl(HlArgs),
    /// Sweep n and record mixed sums of certified forms against the bound.
    #[command(long_about = SWEEP_HELP)]
    Sweep(SweepArgs),
}

const CONSTANTS_HELP: &str = "\
Print the constants of the random sign construction for one shape.

  C_d     = 8 (d!)^{1 - max(1/2, 1/p)} sqrt(log(1 + 4d)),  p = max p_k
  gamma   = min{2, max{p_k : p_k <= 2}}  (2 if no p_k <= 2)
  bound   = C_d^{2(1-1/gamma)} (sum n_k)^{1-1/gamma} prod n_k^{max(1/gamma - 1/p_k, 0)}
  R       = (2 F log(8 (1+4d)^{2 sum n_k}))^{1/2},
  F       = (d!)^{2(1 - 1/min(p,2))} prod n_k^{2(1/2 - 1/max(p_k,2))}
  lambda  = R / F
  level   = 2 sqrt(2) R
  C(xi)   = sqrt(2) max(log 4xi, 2 (sum n_k) log(1+4d))^{1/2}

log is the natural logarithm.";

const SAMPLE_HELP: &str = "\
Draw iid sign tensors until one has a certified norm bracket with

  upper <= min(2 sqrt(2) R, bound)

(see `constants --help`). Draw i uses the key mix(seed, i). Exits with code 3
when no draw certifies within --max-draws or when no available upper bound can
reach the threshold for this shape.";

const NORM_HELP: &str = "\
Bracket ||A|| = sup |A(x^1, ..., x^d)| over the unit balls of l_{p_k}^{n_k}.

  exact for all p_k = inf (vertex enumeration within --budget)
  exact for d = 2, p = (2, 2) (largest singular value)
  otherwise lower = alternating ascent / scaled best vertex,
            upper = min(l_inf value, prod n_k^{1 - 1/p_k} (all p_k >= 2), prod n_k)

The tensor file holds {\"dims\": [...], \"signs\": \"<base64, 1 bit per entry, 1 = +1>\"}.";

const WINDOW_HELP: &str = "\
Compute exact norms of unimodular forms and the ratios ||A|| / f with

  f = (sum n_k^{1/2}) prod n_k^{1/2 - 1/p_k}        (all p_k >= 2)
  lower_const = 1 / (d 2^{(d-1)/2})

Visits every sign tensor when 2^{prod n_k} <= --trials, otherwise samples
--trials tensors. Exits with code 1 if some ratio falls below lower_const.";

const HL_HELP: &str = "\
Check, for every nonempty I of the blocks,

  sum_{j in I} 1/rho_j <= (|I| + 1)/2 - sum_{j in I} |1/p^j|

and report the blow-up exponent and subset bounds (trivial blocks, |1/p| <= 1/2):

  blow_up = max{sum 1/r_k - (d+1)/2 + sum 1/p_k, 0},  r = rho in [1,2]^d
  s(I)    = max{0, sum_{j in I} 1/rho_j - (|I|+1)/2 + sum_{j in I} 1/p_j}

With -n, also the mixed sum (sum_{j1} ( ... (sum_{jk} |A(e_{j1}^{m1}, ..., e_{jk}^{mk})|^{rho_k}) ...)^{rho_1/rho_2})^{1/rho_1}
of a sampled sign tensor.";

const SWEEP_HELP: &str = "\
For each n, certify --trials sign forms of shape (n, ..., n) and record

  hl_lhs = (sum_{j1} ( ... (sum_{jd} |A(e_{j1}, ..., e_{jd})|^{rho_d}) ... )^{rho_1/rho_2})^{1/rho_1}
         = prod n^{1/rho_k}
  ratio  = hl_lhs / bound

The JSON output adds the least-squares slope of log ratio against log n.";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct Common {
    /// 64-bit seed
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output file (stdout if absent)
    #[arg(short = 'o', long = "output")]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Worker threads (0 = one per core); never changes the output
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
}

#[derive(Debug, Args)]
pub struct NormOptions {
    /// Largest number of ±1 vertices to enumerate
    #[arg(long, default_value_t = kszforms::norm::DEFAULT_BUDGET)]
    pub budget: u64,
    /// Alternating ascent restarts
    #[arg(long, default_value_t = 8)]
    pub restarts: usize,
    /// Relative tolerance for iterative methods
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct ConstantsArgs {
    /// Order d (defaults to the length of -n)
    #[arg(short = 'd')]
    pub d: Option<usize>,
    /// Dimensions n_1,...,n_d (a single value is repeated d times)
    #[arg(short = 'n', value_delimiter = ',', required = true)]
    pub n: Vec<usize>,
    /// Exponents p_1,...,p_d, decimals or `inf` (a single value is repeated)
    #[arg(short = 'p', required = true)]
    pub p: String,
    /// Failure probability parameter xi > 1
    #[arg(long, default_value_t = 2.0)]
    pub xi: f64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[arg(short = 'd')]
    pub d: Option<usize>,
    #[arg(short = 'n', value_delimiter = ',', required = true)]
    pub n: Vec<usize>,
    #[arg(short = 'p', required = true)]
    pub p: String,
    #[arg(long, default_value_t = 64)]
    pub max_draws: u64,
    #[command(flatten)]
    pub norm: NormOptions,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct NormArgs {
    /// JSON sign tensor file
    #[arg(long, required = true)]
    pub tensor: PathBuf,
    #[arg(short = 'p', required = true)]
    pub p: String,
    #[command(flatten)]
    pub norm: NormOptions,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct WindowArgs {
    #[arg(short = 'd')]
    pub d: Option<usize>,
    #[arg(short = 'n', value_delimiter = ',', required = true)]
    pub n: Vec<usize>,
    #[arg(short = 'p', required = true)]
    pub p: String,
    #[arg(long, default_value_t = 100)]
    pub trials: u64,
    #[command(flatten)]
    pub norm: NormOptions,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct HlArgs {
    #[arg(short = 'd')]
    pub d: Option<usize>,
    /// Summation exponents rho_1,...,rho_k
    #[arg(long, value_delimiter = ',', required = true)]
    pub rho: Vec<f64>,
    #[arg(short = 'p', required = true)]
    pub p: String,
    /// Block sizes m_1,...,m_k (default: all 1)
    #[arg(long, value_delimiter = ',')]
    pub blocks: Option<Vec<usize>>,
    /// Dimensions of a sampled sign tensor for the mixed sum
    #[arg(short = 'n', value_delimiter = ',')]
    pub n: Option<Vec<usize>>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(short = 'd', required = true)]
    pub d: usize,
    /// Side lengths to sweep
    #[arg(short = 'n', value_delimiter = ',', required = true)]
    pub n: Vec<usize>,
    #[arg(short = 'p', required = true)]
    pub p: String,
    #[arg(long, value_delimiter = ',', required = true)]
    pub rho: Vec<f64>,
    #[arg(long, default_value_t = 1)]
    pub trials: u64,
    #[command(flatten)]
    pub norm: NormOptions,
    #[command(flatten)]
    pub common: Common,
}
