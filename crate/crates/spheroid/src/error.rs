//! Error type shared across the library.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Input outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A numerical procedure failed to converge or produced a
    /// non-finite result where a finite one was required.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// Physical parameters violate their positivity constraints.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// A fit was requested on data with no usable signal.
    #[error("insufficient signal: {0}")]
    InsufficientSignal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
