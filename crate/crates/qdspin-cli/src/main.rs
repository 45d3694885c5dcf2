//! `qdspin` command-line front end.
//!
//! Exit codes: 0 success or PASS, 1 usage, 2 I/O, 3 verification FAIL,
//! 4 tuner failure.

mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command, Format};
use commands::CliError;

fn run(cli: &Cli) -> Result<(), CliError> {
    let out = cli.out.as_deref();
    let json_only = |name: &str| match cli.format {
        Some(Format::Csv) => Err(CliError::Usage(format!("{name} only writes json"))),
        _ => Ok(()),
    };
    match &cli.command {
        Command::Sweep(a) => commands::sweep(a, cli.format.unwrap_or(Format::Csv), out),
        Command::Coeffs(a) => {
            json_only("coeffs")?;
            commands::coeffs(a, cli.seed, out)
        }
        Command::VerifyCp(a) => {
            json_only("verify-cp")?;
            commands::verify_cp(a, out)
        }
        Command::Tune(t) => {
            json_only("tune")?;
            commands::tune(t, out)
        }
        Command::Basis(a) => {
            json_only("basis")?;
            commands::basis(a, out)
        }
        Command::CheckConstraints(a) => {
            json_only("check-constraints")?;
            commands::check_constraints(a, out)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let msg = e.to_string();
            eprintln!("{}", msg.lines().next().unwrap_or("invalid arguments"));
            return ExitCode::from(1);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
