//! Experiment runner around `giat-core`: JSON experiment configs, the
//! decompose / compare / dump-indicators commands, and the CSV and JSON
//! output formats.

pub mod commands;
pub mod config;
pub mod csvio;
pub mod error;

pub use commands::{cmd_compare, cmd_decompose, cmd_dump_indicators, run_problem_strategy};
pub use config::{ExperimentConfig, ProblemEntry, ProblemSource};
pub use error::CliError;
