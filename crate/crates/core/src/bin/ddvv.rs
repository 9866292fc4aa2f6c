use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = ddvv::cli::Cli::parse();
    ExitCode::from(ddvv::cli::run(&cli))
}
