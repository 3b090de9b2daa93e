//! Library error type.

use std::io;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Invalid configuration or arguments (bad shape parameters, out-of-range
    /// cell dimensions, mismatched operator shapes).
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// Numerical failure: factorization breakdown, eigensolver
    /// non-convergence, singular solve.
    #[error("numerical failure: {0}")]
    Numerical(String),
    /// Malformed file contents.
    #[error("format error: {0}")]
    Format(String),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
}

impl Error {
    /// Process exit code for the CLI: 2 config, 3 numerical, 4 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidInput(_) => 2,
            Error::Numerical(_) => 3,
            Error::Format(_) | Error::Io(_) => 4,
        }
    }
}
