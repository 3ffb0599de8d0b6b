//! Library behind the `qring` binary: validated parameter envelopes, unit
//! conversion, the subcommands and their CSV/JSON output.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod solve;
pub mod units;

pub use error::CliError;
