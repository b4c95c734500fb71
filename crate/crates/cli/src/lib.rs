//! Command-line front end: ratio reports, figure data, scans, packet
//! profiles and time-evolution runs. This crate is the only I/O layer.

pub mod args;
pub mod commands;
pub mod error;
pub mod figures;
pub mod output;
pub mod scenario;

pub use args::Cli;
pub use commands::run;
pub use error::{exit_code, CliError};
