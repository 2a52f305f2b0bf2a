use thiserror::Error;

/// Errors raised by the arithmetic, series and representation layers.
///
/// The variants fall into three families that callers (notably the CLI)
/// treat differently: malformed input, mathematical domain violations, and
/// exhaustion of the available precision or truncation order. Only the last
/// family is worth retrying with a larger `M` or `N`.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("prime mismatch: {0} vs {1}")]
    PrimeMismatch(u64, u64),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("domain violation: {0}")]
    Domain(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("precision loss: {0}")]
    PrecisionLoss(String),

    #[error("truncation order exhausted: need {needed}, reliable through {available}")]
    OrderExhausted { needed: usize, available: usize },

    #[error("degree overflow: result needs degree {needed}, budget is {budget}")]
    DegreeOverflow { needed: usize, budget: usize },

    #[error("uncertified range: {0}")]
    Uncertified(String),
}

/// Coarse classification used for exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Parse,
    Domain,
    Precision,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Parse(_) => ErrorKind::Parse,
            Error::PrecisionLoss(_)
            | Error::OrderExhausted { .. }
            | Error::DegreeOverflow { .. }
            | Error::Uncertified(_) => ErrorKind::Precision,
            Error::PrimeMismatch(..)
            | Error::ShapeMismatch(_)
            | Error::Domain(_)
            | Error::DivisionByZero => ErrorKind::Domain,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
