use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{value} is not a unit modulo {modulus}")]
    NotUnit { value: u64, modulus: u64 },
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u64, u64),
    #[error("matrix is not invertible modulo {0}")]
    NotInvertible(u64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("non-integral multiplicity in {0}")]
    NonIntegral(String),
    #[error("p-adic precision exhausted: {0}")]
    Precision(String),
    #[error("derivative is not a unit at the starting approximation")]
    DerivativeNotUnit,
    #[error("size guard exceeded: {0}")]
    SizeGuard(String),
    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),
    #[error("retry budget exhausted: {0}")]
    Budget(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
