use clap::Parser;
use littlent::cli::{report_error, run, Cli};

fn main() {
    let code = match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => report_error(&e),
    };
    std::process::exit(code);
}
