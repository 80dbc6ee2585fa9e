//! File formats, reports and the command-line front end for `milnor-core`.
//!
//! Indices are 1-based in every file format and in text output; the core
//! library is 0-based.

pub mod cli;
pub mod format;
pub mod report;
pub mod verify;

pub use cli::{run, Cli, CliError, Outcome};
