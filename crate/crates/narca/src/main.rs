use std::process::ExitCode;

use clap::error::ErrorKind as ClapKind;
use clap::Parser;
use narca::cli::{run, Cli};
use narca::error::{ErrorKind, ErrorReport};

fn fail(report: &ErrorReport) -> ExitCode {
    eprintln!("{}", serde_json::to_string(report).expect("error report serializes"));
    ExitCode::from(report.exit_code as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ClapKind::DisplayHelp | ClapKind::DisplayVersion) => e.exit(),
        Err(e) => {
            return fail(&ErrorReport {
                kind: ErrorKind::Config,
                exit_code: ErrorKind::Config.exit_code(),
                message: e.to_string().trim_end().to_string(),
                path: None,
            })
        }
    };
    match run(&cli) {
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => fail(&e.report()),
    }
}
