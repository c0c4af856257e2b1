use std::process::ExitCode;

use clap::Parser;
use cohn_core::cli::{run, Cli};

fn main() -> ExitCode {
    ExitCode::from(run(&Cli::parse()))
}
