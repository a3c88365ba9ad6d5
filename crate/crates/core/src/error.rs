use thiserror::Error;

use crate::measures::Violation;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    Invalid(#[from] Violation),

    #[error("size mismatch: expected {expected}, found {found}")]
    SizeMismatch { expected: usize, found: usize },

    #[error("expected a probability distribution, total mass is {sum}")]
    NotNormalized { sum: f64 },

    #[error("parameter `{name}` out of range: {value}")]
    OutOfRange { name: &'static str, value: f64 },

    #[error("hypothesis {hypothesis} has zero prior probability")]
    ZeroPrior { hypothesis: usize },

    #[error("metric q({hypothesis}, {observation}) = {value} must be positive on the support")]
    NonPositiveMetric { hypothesis: usize, observation: usize, value: f64 },

    #[error("codeword {index} repeats an earlier codeword")]
    DuplicateCodeword { index: usize },

    #[error("codeword {index} uses a symbol outside the input alphabet")]
    SymbolOutOfRange { index: usize },

    #[error("source symbol {index} has probability {value}; a point-mass source is not supported")]
    PointMass { index: usize, value: f64 },

    #[error("{what} = {size} exceeds the limit of {limit}")]
    GuardExceeded { what: &'static str, size: u128, limit: u128 },
}

pub type Result<T> = std::result::Result<T, Error>;
