//! Error type shared by every module of the toolkit.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation (e.g. an
    /// evaluation point outside `[0, 1]`).
    #[error("domain error: {0}")]
    Domain(String),

    /// The caller violated a usage contract (bad node counts, invalid
    /// brackets, malformed boundary conditions, ...).
    #[error("usage error: {0}")]
    Usage(String),

    /// A numerical kernel failed to meet its tolerance contract.
    #[error("numerical error in {context}: {details}")]
    Numerical {
        context: &'static str,
        details: String,
    },

    /// An eigenvalue bracket could not be established within the
    /// expansion budget.
    #[error("eigenvalue search failed: {0}")]
    Search(String),

    /// The requested backend cannot handle the given boundary condition.
    #[error("unsupported combination: {0}")]
    Unsupported(String),

    /// A structured text input failed to parse.
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}
