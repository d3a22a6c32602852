//! Command-line front end for `bbtspec`: symbol ingestion, analysis
//! subcommands, parameter sweeps and CSV/JSON/SVG output.

pub mod analysis;
pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod newton_check;
pub mod output;
pub mod report;

pub use args::Cli;
pub use config::RunConfig;
pub use error::CliError;

/// Environment variable capping worker threads (0 or unset: automatic).
pub const THREADS_ENV: &str = "BBTSPEC_THREADS";

/// Configures the global thread pool from [`THREADS_ENV`].
pub fn init_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var(THREADS_ENV) else { return Ok(()) };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| CliError::Input(format!("{THREADS_ENV} must be a non-negative integer, got {raw:?}")))?;
    if n > 0 {
        // Fails only if a pool already exists, which keeps the first setting.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

/// Runs a parsed command line and returns the process exit code.
pub fn run_cli(cli: &Cli) -> i32 {
    let result = init_threads().and_then(|()| RunConfig::from_cli(cli)).and_then(|cfg| commands::run(&cfg));
    match result {
        Ok(outcome) => {
            for line in &outcome.lines {
                println!("{line}");
            }
            for f in &outcome.files {
                println!("wrote {}", f.display());
            }
            if outcome.degenerate {
                1
            } else {
                0
            }
        }
        Err(e) => {
            eprintln!("bbtspec: {e}");
            e.exit_code()
        }
    }
}
