//! Command-line front end for `conicray`.
//!
//! [`run`] parses arguments and executes a command, returning what should go
//! to stdout and stderr so the binary and the tests share one code path.

pub mod csv;
pub mod error;
pub mod figure;
pub mod fmt;
pub mod scene_file;
pub mod svg;

mod commands;

use std::ffi::OsString;
use std::path::Path;

pub use commands::{Cli, Command};
pub use error::CliError;

#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct Output {
    pub stdout: String,
    /// Non-fatal warnings, one per line.
    pub warnings: Vec<String>,
}

impl Output {
    fn line(&mut self, s: impl AsRef<str>) {
        self.stdout.push_str(s.as_ref());
        self.stdout.push('\n');
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Result<Output, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    use clap::Parser;
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return Ok(Output {
                    stdout: e.to_string(),
                    warnings: Vec::new(),
                });
            }
            let first = e.to_string().lines().next().unwrap_or("invalid arguments").to_string();
            return Err(CliError::Usage(first.trim_start_matches("error: ").to_string()));
        }
    };
    commands::execute(&cli)
}

pub(crate) fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

pub(crate) fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}
