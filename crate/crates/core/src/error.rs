use thiserror::Error;

/// Errors raised by the bound transforms, samplers and checkers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: `{field}` = {value} ({reason})")]
    Domain {
        field: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("upper-range overflow: {y} is not below sup range(G) = {sup}")]
    UpperRangeOverflow { y: f64, sup: f64 },

    #[error("non-finite coefficient at t = {t}, state = {state:?}")]
    NonFinite { t: f64, state: Vec<f64> },

    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },

    #[error("path tagged {found} but the check requires {required}")]
    WrongAssumption {
        required: &'static str,
        found: &'static str,
    },

    #[error("rate function refused: {0}")]
    NotConvex(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(field: &'static str, value: f64, reason: &'static str) -> Error {
    Error::Domain {
        field,
        value,
        reason,
    }
}
