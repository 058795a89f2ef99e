use thiserror::Error;

/// Errors raised by the library. Decoding failures are not errors in this
/// sense; they are reported through [`crate::decoder::DecodeOutcome`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid field parameters: {0}")]
    InvalidField(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("operands belong to different fields")]
    FieldMismatch,

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("coefficient matrix is rank deficient (rank {rank}, need {needed})")]
    ErasureRankDeficient { rank: usize, needed: usize },

    #[error("linear system is inconsistent")]
    Inconsistent,

    #[error("syndrome rank {t} leaves no parity checks (redundancy {redundancy})")]
    TooManyErrors { t: usize, redundancy: usize },

    #[error("recovered support has dimensions {kernel_dims:?} summing to {total}, syndrome rank is {t}")]
    SupportMismatch {
        kernel_dims: Vec<usize>,
        total: usize,
        t: usize,
    },

    #[error("received matrix has a trivial right kernel")]
    NoKernel,

    #[error("enumeration of {count} codewords exceeds the budget of {budget}")]
    TooLargeToEnumerate { count: u128, budget: u128 },

    #[error("minimum distance is undefined for the zero code")]
    ZeroCode,

    #[error("value out of domain: {0}")]
    Domain(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("enumeration budget exceeded: {0}")]
    BudgetExceeded(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
