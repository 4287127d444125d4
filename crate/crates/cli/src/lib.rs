//! Batch driver for the `heightdyn` experiments: one experiment per
//! invocation, reported as a JSON document with sorted keys.

pub mod args;
pub mod commands;
pub mod input;
pub mod report;
pub mod verify;

use std::fs;

use clap::Parser;

use args::Cli;

/// What a run printed and how it ended.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Execution {
    pub stdout: String,
    pub stderr: String,
    pub exit_code: i32,
}

/// Parses `argv` (including the program name), runs the command and
/// renders its report. Usage and input errors give exit code 2.
pub fn execute<I, T>(argv: I) -> Execution
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Execution { stdout: text, stderr: String::new(), exit_code: 0 }
            } else {
                Execution { stdout: String::new(), stderr: text, exit_code: 2 }
            };
        }
    };
    let usage_error = |msg: String| Execution {
        stdout: String::new(),
        stderr: format!("error: {msg}\n"),
        exit_code: 2,
    };
    let outcome = match commands::run(&cli.common, &cli.command) {
        Ok(o) => o,
        Err(e) => return usage_error(e.0),
    };
    if let (Some(path), Some(table)) = (&cli.common.csv, &outcome.table) {
        if let Err(e) = fs::write(path, table.to_csv()) {
            return usage_error(format!("cannot write {}: {e}", path.display()));
        }
    }
    Execution {
        stdout: outcome.report.render(),
        stderr: String::new(),
        exit_code: outcome.report.status.exit_code(),
    }
}
