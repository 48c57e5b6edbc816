use clap::Parser;
use hmsim::commands::{execute, RunConfig};

fn main() {
    let config = RunConfig::parse();
    let code = execute(
        &config,
        &mut std::io::stdin().lock(),
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    );
    std::process::exit(code);
}
