use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use cqg_cli::config::{Cli, RunConfig};
use cqg_cli::error::{CliError, EXIT_VALIDATION};
use cqg_cli::report::write_output;
use cqg_cli::run_command;

fn clap_code(kind: ErrorKind) -> &'static str {
    match kind {
        ErrorKind::InvalidValue => "CLI_INVALID_VALUE",
        ErrorKind::UnknownArgument => "CLI_UNKNOWN_FLAG",
        ErrorKind::ArgumentConflict => "CLI_CONFLICTING_FLAGS",
        ErrorKind::MissingRequiredArgument => "CLI_MISSING_COMMAND",
        _ => "CLI_USAGE",
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let mut code = clap_code(e.kind());
            // The command is the only positional; a bad value there is an unknown command.
            if e.kind() == ErrorKind::InvalidValue && std::env::args().nth(1).is_some_and(|a| !a.starts_with('-')) {
                let first = std::env::args().nth(1).unwrap_or_default();
                if e.to_string().contains(&format!("'{first}'")) {
                    code = "CLI_UNKNOWN_COMMAND";
                }
            }
            eprintln!("error[{code}]: {}", e.to_string().trim_start_matches("error: ").trim_end());
            return ExitCode::from(EXIT_VALIDATION as u8);
        }
    };
    let result = RunConfig::from_cli(cli).and_then(|cfg| {
        let outcome = run_command(&cfg)?;
        write_output(&outcome.bytes, cfg.output.as_deref())?;
        Ok::<_, CliError>(outcome.exit)
    });
    match result {
        Ok(exit) => ExitCode::from(exit as u8),
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit as u8)
        }
    }
}
