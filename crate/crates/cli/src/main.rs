use clap::Parser;

fn main() {
    let cli = bbtspec_cli::Cli::parse();
    std::process::exit(bbtspec_cli::run_cli(&cli));
}
