//! Command-line front end for `hcm-core`: configuration files, CSV tables,
//! JSON reports and parallel sweeps.
//!
//! The JSON reports follow the schemas shipped in `schemas/`.

pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod formats;
pub mod parallel;

pub use error::{CliError, CliResult};
