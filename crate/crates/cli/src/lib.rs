//! Command-line front end for `tfr-core`: JSON input documents, command
//! dispatch and canonical JSON reports.

pub mod commands;
pub mod fixtures;
pub mod input;

pub use commands::{run, run_command, CharSel, CliError, CommandKind, Report, RunOptions, Status};
pub use input::{build_complex, parse_input, render_input, InputDocument, InputError};
