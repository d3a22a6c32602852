use std::path::PathBuf;

use bbtspec::grid::Rect;
use bbtspec::spectra::DEFAULT_TAU;
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "bbtspec", version, about = "Asymptotic spectra of real banded block Toeplitz matrices")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Options,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Full analysis: limiting set, reality verdict, net census, rays.
    Analyze,
    /// Eigenvalues of the truncation T_n(B).
    Eig,
    /// Trace the net Gamma(B) and classify its ovals.
    Gamma,
    /// Sample the limiting set Lambda_0(B).
    Lambda0,
    /// Run `analyze` once per value of a `$NAME` placeholder.
    Sweep,
    /// Check Newton polygons of random symbols against a brute-force expansion.
    NewtonCheck,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Analyze => "analyze",
            Command::Eig => "eig",
            Command::Gamma => "gamma",
            Command::Lambda0 => "lambda0",
            Command::Sweep => "sweep",
            Command::NewtonCheck => "newton-check",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Clone, Debug, Args)]
pub struct Options {
    /// Symbol JSON file.
    #[arg(long, global = true)]
    pub symbol: Option<PathBuf>,

    /// Limiting-set box `x0,x1,y0,y1` in the lambda plane (default: derived from the symbol).
    #[arg(long = "box", global = true, allow_hyphen_values = true)]
    pub lambda_box: Option<Rect>,

    /// Net box `x0,x1,y0,y1` in the z plane (default: derived from the symbol).
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub gamma_box: Option<Rect>,

    /// Limiting-set grid resolution (cells per side, power of two in [64, 4096]).
    #[arg(long, global = true, default_value_t = 1024)]
    pub res: usize,

    /// Net grid resolution (defaults to --res).
    #[arg(long, global = true)]
    pub gamma_res: Option<usize>,

    /// Relative modulus tolerance for the limiting set.
    #[arg(long, global = true, default_value_t = DEFAULT_TAU)]
    pub tol: f64,

    /// Truncation size in blocks.
    #[arg(long, global = true, default_value_t = 100)]
    pub n: usize,

    /// Placeholder name swept by `sweep` (without the `$`).
    #[arg(long, global = true)]
    pub param: Option<String>,

    /// Comma-separated sweep values.
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    pub values: Vec<String>,

    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,

    /// Output formats.
    #[arg(long, global = true, value_delimiter = ',', default_value = "csv,json,svg")]
    pub format: Vec<Format>,

    /// Number of random symbols for `newton-check`.
    #[arg(long, global = true, default_value_t = 100)]
    pub trials: usize,

    /// Seed for `newton-check`.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Block sizes cycled through by `newton-check`.
    #[arg(long = "k", global = true, value_delimiter = ',', default_values_t = [2, 3])]
    pub block_sizes: Vec<usize>,

    /// Also compute the implicit curve g(x, y) = 0 of the net.
    #[arg(long, global = true)]
    pub implicit: bool,

    /// Also run the best-effort search for isolated limit points.
    #[arg(long, global = true)]
    pub g0: bool,

    /// Grid resolution of the isolated-point search.
    #[arg(long, global = true, default_value_t = 64)]
    pub g0_res: usize,

    /// Also compute eigenvalues of T_n(B) in `analyze` and `sweep`.
    #[arg(long, global = true)]
    pub eig: bool,
}
