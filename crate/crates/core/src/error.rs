use thiserror::Error;

/// Errors raised by the exact-arithmetic and geometry layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by the zero function")]
    DivisionByZero,

    #[error("pole at evaluation point {point}")]
    Pole { point: String },

    #[error("term limit exceeded: {terms} terms (limit {limit})")]
    TermLimit { terms: usize, limit: usize },

    #[error("quaternion with zero norm is not invertible")]
    NotInvertible,

    #[error("unsupported metric: {0}")]
    UnsupportedMetric(String),

    #[error("irrational value requested: {0}")]
    Irrational(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("point generation exhausted after {attempts} attempts")]
    PointExhaustion { attempts: usize },

    #[error("unknown label: {0}")]
    UnknownLabel(String),
}

pub type Result<T> = std::result::Result<T, Error>;
