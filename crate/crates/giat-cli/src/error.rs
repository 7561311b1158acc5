//! Error type with the exit-code split the binary promises.

use std::fmt;

/// Command-line errors: usage problems exit 1, runtime failures exit 2.
#[derive(Debug)]
pub enum CliError {
    /// Bad invocation: missing config, unknown problem or strategy name.
    Usage(String),
    /// Failure while running: evaluation errors, unwritable outputs.
    Runtime(String),
}

impl CliError {
    /// Process exit code for this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Runtime(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) | CliError::Runtime(msg) => f.write_str(msg),
        }
    }
}

impl std::error::Error for CliError {}

impl From<giat_core::Error> for CliError {
    fn from(err: giat_core::Error) -> Self {
        CliError::Runtime(err.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Runtime(err.to_string())
    }
}
