use crate::poly::MultiIndex;
use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("dimension mismatch: expected {expected} coordinates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("coefficient at {index} is not divisible by the requested divisor")]
    NonIntegralQuotient { index: MultiIndex },

    #[error("division by zero")]
    DivisionByZero,

    #[error("polynomial is not homogeneous")]
    NotHomogeneous,

    #[error("operation requires a bivariate form")]
    NotBivariate,

    #[error("budget exceeded during {what}: needs {needed}, limit {limit}")]
    BudgetExceeded {
        what: &'static str,
        needed: u128,
        limit: u128,
    },

    #[error("max gamma {max_gamma} exceeded for p={p}; a-priori cap from k!*gcd divisibility: {cap}")]
    MaxGammaExceeded { p: u64, max_gamma: u32, cap: String },

    #[error("no root data available for prime {p}")]
    MissingRootData { p: u64 },

    #[error("Hensel hypothesis not satisfiable at precision {precision} for p={p}")]
    HenselHypothesis { p: u64, precision: u32 },

    #[error("gcd({a}, {q}) != 1")]
    NotCoprime { a: u64, q: u64 },

    #[error("quadrature resolution insufficient: need at least {needed} points per axis, got {got}")]
    ResolutionInsufficient { needed: u64, got: u64 },

    #[error("sumset upper bound refused: Y-Y is not contained in X together with 0 (offending difference {difference})")]
    SumsetNotContained { difference: u64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
