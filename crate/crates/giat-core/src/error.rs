//! Error type shared by all modules.

use alloc::string::String;
use core::fmt;

/// Errors produced while building problems, matrices, or decompositions.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A problem specification violates one of its invariants.
    InvalidSpec(String),
    /// A vector or matrix had the wrong dimension.
    DimensionMismatch {
        /// Dimension required by the callee.
        expected: usize,
        /// Dimension actually supplied.
        got: usize,
    },
    /// A variable index is outside `0..n`.
    IndexOutOfRange {
        /// The offending index.
        index: usize,
        /// The dimension it was checked against.
        n: usize,
    },
    /// A numeric parameter is out of its admissible range.
    InvalidParameter(String),
    /// A threshold decision was applied with the wrong value basis
    /// (indicator matrix missing or supplied when not expected).
    BasisMismatch,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidSpec(msg) => write!(f, "invalid problem spec: {msg}"),
            Error::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            Error::IndexOutOfRange { index, n } => {
                write!(f, "variable index {index} out of range for dimension {n}")
            }
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            Error::BasisMismatch => {
                write!(f, "threshold basis does not match the supplied matrices")
            }
        }
    }
}

impl core::error::Error for Error {}
