mod args;
mod run;

use std::process::ExitCode;

use thiserror::Error;

/// Failure classes, one exit code each.
#[derive(Debug, Error)]
pub enum CliError {
    /// `--help` / `--version` output; not a failure.
    #[error("{0}")]
    Info(String),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Algorithm(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Info(_) => 0,
            CliError::Usage(_) => 1,
            CliError::Input(_) => 2,
            CliError::Algorithm(_) => 3,
        }
    }

    /// First meaningful line, without clap's `error: ` prefix.
    fn diagnostic(&self) -> String {
        let text = self.to_string();
        let line = text.lines().find(|l| !l.trim().is_empty()).unwrap_or("");
        line.trim_start_matches("error: ").to_string()
    }
}

fn main() -> ExitCode {
    match args::parse_args(std::env::args_os()).and_then(|cfg| run::run(&cfg)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Info(text)) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("mrpoly: {}", e.diagnostic());
            ExitCode::from(e.exit_code())
        }
    }
}
