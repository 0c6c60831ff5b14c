use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid support: {0}")]
    InvalidSupport(String),
    #[error("invalid variance system: {0}")]
    InvalidVariance(String),
    #[error("invalid system: {0}")]
    InvalidSystem(String),
    #[error("point outside the positive orthant: coordinate {index} is {value}")]
    Domain { index: usize, value: f64 },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("polynomial has no nonzero coefficient")]
    ZeroPolynomial,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
