use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("invalid geometry: {0}")]
    Geometry(String),

    #[error("not a group element: {0}")]
    NotInGroup(String),

    #[error("pole of {function} at {at}")]
    Pole { function: &'static str, at: String },

    #[error("argument outside domain of {function}: {detail}")]
    Domain {
        function: &'static str,
        detail: String,
    },

    #[error("{function} did not converge after {terms} terms")]
    NonConvergence { function: &'static str, terms: usize },

    #[error("quadrature budget exhausted ({evals} evaluations, error estimate {estimate:e})")]
    Budget { evals: usize, estimate: f64 },

    #[error("finite-difference step {0:e} out of range")]
    Step(f64),

    #[error("config: {0}")]
    Config(String),

    #[error("parse: {0}")]
    Parse(String),

    #[error("io: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
