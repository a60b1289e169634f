use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("elliptic parameter m = {0} is outside the supported domain m < 1")]
    ParameterDomain(f64),

    #[error("non-finite input for {0}")]
    NonFinite(&'static str),

    #[error("invalid field configuration: {0}")]
    InvalidConfig(String),

    #[error("frame is off shell: p·p = {actual}, the dispersion relation requires {expected}")]
    OffShell { actual: f64, expected: f64 },

    #[error("step size must be positive, got {0}")]
    InvalidStep(f64),

    #[error("grid too coarse: {points} points per period, at least {min} required")]
    GridTooCoarse { points: usize, min: usize },

    #[error("{0}")]
    Unsupported(String),

    #[error("integration failed: {0}")]
    Integration(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<csv::Error> for Error {
    fn from(err: csv::Error) -> Self {
        Error::Parse(err.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Parse(err.to_string())
    }
}
