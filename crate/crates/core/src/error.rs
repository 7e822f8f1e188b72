use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Argument outside the supported range of a special function.
    #[error("argument {arg} outside supported range [-{max}, {max}] of {function}")]
    Domain {
        function: &'static str,
        arg: f64,
        max: f64,
    },
    #[error("invalid domain: {0}")]
    InvalidDomain(String),
    #[error("invalid quadrature spec: {0}")]
    InvalidSpec(String),
    /// A theorem hypothesis (area condition, positivity, field class) is not met.
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("domain is not star-shaped with respect to ({x1}, {x2})")]
    NotStarShaped { x1: f64, x2: f64 },
    #[error("invalid field descriptor: {0}")]
    Descriptor(String),
    #[error("{0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
