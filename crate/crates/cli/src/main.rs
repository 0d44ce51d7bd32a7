use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    qtd_cli::run(qtd_cli::Cli::parse())
}
