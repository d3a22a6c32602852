#![no_main]

use bbtspec::grid::Rect;
use bbtspec_cli::config::sweep_values;
use bbtspec_cli::{Cli, RunConfig};
use clap::Parser;
use libfuzzer_sys::fuzz_target;

// Box and value lists, then the whole command line split on whitespace.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let _ = text.parse::<Rect>();
    let values: Vec<String> = text.split(',').map(str::to_string).collect();
    if let Ok(sorted) = sweep_values(&values) {
        assert!(!sorted.is_empty());
    }
    let args = std::iter::once("bbtspec").chain(text.split_whitespace());
    if let Ok(cli) = Cli::try_parse_from(args) {
        let _ = RunConfig::from_cli(&cli);
    }
});
