use std::path::PathBuf;

use bbtspec::grid::Rect;
use bbtspec::symbolkit::Scalar;
use serde::Serialize;

use crate::args::{Cli, Command, Format};
use crate::error::CliError;

pub const MIN_RES: usize = 64;
pub const MAX_RES: usize = 4096;
/// Largest truncation dimension `n k` accepted by `eig`.
pub const MAX_EIG_DIM: usize = 2000;
pub const MAX_TRIALS: usize = 100_000;

#[derive(Clone, Debug, Serialize)]
pub struct SweepSpec {
    pub param: String,
    /// Values as given on the command line, sorted by numeric value.
    pub values: Vec<String>,
}

/// Validated command-line configuration, echoed into every report.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub subcommand: String,
    pub symbol: Option<PathBuf>,
    pub lambda0_box: Option<Rect>,
    pub gamma_box: Option<Rect>,
    pub res: usize,
    pub gamma_res: usize,
    pub tol: f64,
    pub n: usize,
    pub out: PathBuf,
    pub formats: Vec<String>,
    pub sweep: Option<SweepSpec>,
    pub trials: usize,
    pub seed: u64,
    pub block_sizes: Vec<usize>,
    pub implicit: bool,
    pub g0: bool,
    pub g0_res: usize,
    pub eig: bool,
    #[serde(skip)]
    pub command: Option<Command>,
    #[serde(skip)]
    format_set: Vec<Format>,
}

fn check_res(name: &str, res: usize) -> Result<(), CliError> {
    if !(MIN_RES..=MAX_RES).contains(&res) || !res.is_power_of_two() {
        return Err(CliError::Input(format!("{name} must be a power of two in [{MIN_RES}, {MAX_RES}], got {res}")));
    }
    Ok(())
}

impl RunConfig {
    pub fn from_cli(cli: &Cli) -> Result<RunConfig, CliError> {
        let o = &cli.opts;
        check_res("--res", o.res)?;
        let gamma_res = o.gamma_res.unwrap_or(o.res);
        check_res("--gamma-res", gamma_res)?;
        if !(o.tol.is_finite() && o.tol > 0.0) {
            return Err(CliError::Input(format!("--tol must be positive, got {}", o.tol)));
        }
        if o.n == 0 {
            return Err(CliError::Input("--n must be at least 1".into()));
        }
        if o.g0_res < 8 || o.g0_res > MAX_RES {
            return Err(CliError::Input(format!("--g0-res must lie in [8, {MAX_RES}], got {}", o.g0_res)));
        }
        if o.format.is_empty() {
            return Err(CliError::Input("--format needs at least one of csv,json,svg".into()));
        }
        let mut format_set = o.format.clone();
        format_set.sort();
        format_set.dedup();
        let command = cli.command;
        if command != Command::NewtonCheck && o.symbol.is_none() {
            return Err(CliError::Input(format!("{} needs --symbol", command.name())));
        }
        let sweep = if command == Command::Sweep {
            let param = o.param.clone().ok_or_else(|| CliError::Input("sweep needs --param".into()))?;
            let param = param.strip_prefix('$').unwrap_or(&param).to_string();
            if param.is_empty() {
                return Err(CliError::Input("--param is empty".into()));
            }
            Some(SweepSpec { param, values: sweep_values(&o.values)? })
        } else {
            None
        };
        if command == Command::NewtonCheck {
            if o.trials == 0 || o.trials > MAX_TRIALS {
                return Err(CliError::Input(format!("--trials must lie in [1, {MAX_TRIALS}], got {}", o.trials)));
            }
            if o.block_sizes.is_empty() || o.block_sizes.iter().any(|&k| k == 0 || k > 6) {
                return Err(CliError::Input("--k values must lie in [1, 6]".into()));
            }
        }
        Ok(RunConfig {
            subcommand: command.name().to_string(),
            symbol: o.symbol.clone(),
            lambda0_box: o.lambda_box,
            gamma_box: o.gamma_box,
            res: o.res,
            gamma_res,
            tol: o.tol,
            n: o.n,
            out: o.out.clone(),
            formats: format_set.iter().map(|f| format!("{f:?}").to_lowercase()).collect(),
            sweep,
            trials: o.trials,
            seed: o.seed,
            block_sizes: o.block_sizes.clone(),
            implicit: o.implicit,
            g0: o.g0,
            g0_res: o.g0_res,
            eig: o.eig,
            command: Some(command),
            format_set,
        })
    }

    pub fn wants(&self, f: Format) -> bool {
        self.format_set.contains(&f)
    }
}

/// Parses and sorts sweep values; each must be a finite real literal.
pub fn sweep_values(raw: &[String]) -> Result<Vec<String>, CliError> {
    let mut parsed = Vec::new();
    for v in raw {
        let v = v.trim();
        if v.is_empty() {
            continue;
        }
        let s: Scalar = v.parse().map_err(|e| CliError::Input(format!("sweep value {v:?}: {e}")))?;
        let x = s.to_f64();
        if !x.is_finite() {
            return Err(CliError::Input(format!("sweep value {v:?} is out of range")));
        }
        parsed.push((x, v.to_string()));
    }
    if parsed.is_empty() {
        return Err(CliError::Input("sweep needs a non-empty --values list".into()));
    }
    parsed.sort_by(|a, b| a.0.total_cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
    parsed.dedup_by(|a, b| a.1 == b.1);
    Ok(parsed.into_iter().map(|p| p.1).collect())
}
