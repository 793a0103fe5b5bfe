//! Command-line driver: configuration parsing and command execution.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` also rejects NaN

pub mod commands;
pub mod config;
pub mod error;

pub use commands::{build_scenario, execute, Outcome};
pub use config::{parse_config, Command, Overrides, RunConfig};
pub use error::{CliError, Result};
