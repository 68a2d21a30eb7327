//! `cvd` command-line front end.
//!
//! Exit codes:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success |
//! | 1 | usage error (bad or missing flags) |
//! | 2 | I/O error (unreadable input, undecodable PNG, unwritable output) |
//! | 3 | validation error (bad parameter value, dimension mismatch, ...) |
//! | 4 | internal error |
//!
//! Failures print one line to stderr: `cvd: error[<code>]: <message>`,
//! where `<code>` is the same reason code the HTTP service reports.

use std::ffi::OsString;
use std::io::{self, Write};

use clap::error::ErrorKind as ClapErrorKind;
use clap::Parser;

use cvd_core::{Error, ErrorKind, Result};

pub mod args;
pub mod bench;
pub mod commands;
pub mod config;

use args::{Cli, Command};
use commands::FrameMode;
use config::FileConfig;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_IO: i32 = 2;
pub const EXIT_VALIDATION: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;

pub fn exit_code(e: &Error) -> i32 {
    match e.kind() {
        ErrorKind::Io => EXIT_IO,
        ErrorKind::Validation => EXIT_VALIDATION,
        ErrorKind::Internal => EXIT_INTERNAL,
    }
}

pub fn execute(cli: Cli, out: &mut dyn Write) -> Result<()> {
    let cfg = match &cli.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    match &cli.command {
        Command::Rainbow(a) => commands::rainbow(a),
        Command::Simulate(a) => commands::frame(a, &cfg, FrameMode::Simulate, out),
        Command::Correct(a) => commands::frame(a, &cfg, FrameMode::Correct, out),
        Command::Augment(a) => commands::frame(a, &cfg, FrameMode::Augment, out),
        Command::Plate(a) => commands::plate(a, out),
        Command::Compose(a) => commands::compose_cmd(a, &cfg),
        Command::Bench(a) => bench::bench(a, out),
        Command::Serve(a) => commands::serve(a),
    }
}

/// Parses `args` (including the program name) and runs; returns the exit
/// code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ClapErrorKind::DisplayHelp | ClapErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
        }
    };
    let stdout = io::stdout();
    match execute(cli, &mut stdout.lock()) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("cvd: error[{}]: {e}", e.code());
            exit_code(&e)
        }
    }
}
