mod args;
mod commands;
mod output;

use args::{Cli, Command};
use clap::Parser;
use commands::{cmd_contour, cmd_metric, cmd_oracle_check, cmd_scaling, CliError};
use std::process::ExitCode;

fn resolve_command(cli: Cli) -> Result<Command, CliError> {
    match (cli.command, cli.config) {
        (Some(cmd), None) => Ok(cmd),
        (None, Some(path)) => {
            let text = std::fs::read_to_string(&path).map_err(|e| CliError {
                code: commands::EXIT_INVALID_INPUT,
                message: format!("cannot read config {}: {e}", path.display()),
            })?;
            serde_json::from_str(&text).map_err(|e| CliError {
                code: commands::EXIT_INVALID_INPUT,
                message: format!("bad config {}: {e}", path.display()),
            })
        }
        (Some(_), Some(_)) => Err(CliError {
            code: commands::EXIT_INVALID_INPUT,
            message: "give either a subcommand or --config, not both".into(),
        }),
        (None, None) => Err(CliError {
            code: commands::EXIT_INVALID_INPUT,
            message: "missing subcommand; see --help".into(),
        }),
    }
}

fn run(command: Command) -> Result<u8, CliError> {
    match command {
        Command::Metric(args) => cmd_metric(&args),
        Command::Contour(args) => cmd_contour(&args),
        Command::Scaling(args) => cmd_scaling(&args),
        Command::OracleCheck(args) => cmd_oracle_check(&args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match resolve_command(cli).and_then(run) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
