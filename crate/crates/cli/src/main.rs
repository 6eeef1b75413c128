//! `posmap`: command-line front end for the `posmap` library.
//!
//! Exit status: 0 on success, 1 when the library rejects the request (the
//! error object names the failure), 2 for usage errors and malformed input.

mod args;
mod commands;
mod io;
mod json;
mod table;

use std::process::ExitCode;

use clap::Parser;

use crate::args::Cli;
use crate::commands::Ctx;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = io::tolerance_from_env().and_then(|tol| {
        commands::run(
            cli.command,
            &Ctx {
                tol,
                verbose: cli.verbose,
            },
        )
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            print!("{}", e.to_json());
            if cli.verbose {
                eprintln!("error: {e}");
            }
            ExitCode::from(e.exit_code())
        }
    }
}
