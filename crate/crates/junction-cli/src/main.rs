use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use junction_cli::run::EXIT_INPUT_ERROR;
use junction_cli::{run, Cli, RunConfig};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(EXIT_INPUT_ERROR);
        }
    };
    let config = match RunConfig::new(cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INPUT_ERROR);
        }
    };
    match run(&config) {
        Ok(outcome) => {
            if let Some(text) = outcome.written.iter().find(|p| p.ends_with("report.txt")) {
                if let Ok(s) = std::fs::read_to_string(text) {
                    print!("{s}");
                }
            } else {
                println!("{}", outcome.report.verdict.status.as_str());
            }
            for w in &outcome.report.warnings {
                eprintln!("warning: {w}");
            }
            ExitCode::from(outcome.exit_code())
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
