use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("time parameter must be positive, got {0}")]
    NonPositiveTime(f64),

    #[error("Laguerre type must exceed -1, got {0}")]
    InvalidLaguerreType(f64),

    #[error("argument {value} outside the domain {domain}")]
    OutOfDomain { value: f64, domain: &'static str },

    #[error("dimension {0} is not supported here")]
    UnsupportedDimension(usize),

    #[error("sphere rule exact to degree {have}, need at least {need}")]
    InsufficientRuleOrder { need: usize, have: usize },

    #[error("exponent p must be at least {min}, got {p}")]
    InvalidExponent { p: f64, min: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("Hermite expansion misses {mass:.3e} of the L2 mass (limit {limit})")]
    Truncation { mass: f64, limit: f64 },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("i/o: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}
