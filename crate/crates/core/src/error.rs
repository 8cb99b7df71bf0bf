use thiserror::Error;

/// Errors raised by the p-adic arithmetic, linear algebra and solver layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("operands carry different primes ({0} and {1})")]
    PrimeMismatch(u64, u64),

    #[error("{0} is not a supported prime")]
    NotPrime(u64),

    #[error("division by an inexact zero O(p^{precision})")]
    DivisionByZero { precision: i64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is singular at working precision (pivot {index} has valuation {valuation})")]
    Singular { index: usize, valuation: i64 },

    #[error("inconsistent linear system (residual valuation {valuation})")]
    Inconsistent { valuation: i64 },

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("no solutions: {0}")]
    NoSolutions(String),

    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}
