use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    match vmat_cli::run(vmat_cli::Cli::parse()) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
