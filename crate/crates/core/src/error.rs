use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("exponent must be at least 1 (got {0})")]
    InvalidExponent(f64),

    #[error("invalid bar [{birth}, {death}): {reason}")]
    InvalidBar {
        birth: f64,
        death: f64,
        reason: &'static str,
    },

    #[error("invalid contour: {0}")]
    InvalidContour(String),

    #[error("lifetime requires a <= b (got a = {a}, b = {b})")]
    ReversedInterval { a: f64, b: f64 },

    #[error("not a monomorphism presentation: {0}")]
    NotMonomorphism(String),

    #[error("not an epimorphism copresentation: {0}")]
    NotEpimorphism(String),

    #[error("inconsistent pairing: start {start} exceeds end {end}")]
    InconsistentPairing { start: f64, end: f64 },

    #[error("size limit exceeded: {0}")]
    TooLarge(String),

    #[error("index {index} out of range 0..={max}")]
    OutOfRange { index: usize, max: usize },

    #[error("degenerate dataset: {0}")]
    Degenerate(String),

    #[error("non-finite loss at {0}")]
    NonFinite(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Parse {
            line: err.line(),
            message: err.to_string(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
