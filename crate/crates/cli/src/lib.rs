//! File formats, alignment, parallel execution and the command-line front
//! end for `comove-core`.

pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod format;
pub mod ingest;
pub mod parallel;

pub use error::{CliError, Result};
