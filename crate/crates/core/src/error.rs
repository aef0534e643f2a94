use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parameter out of domain: {0}")]
    Domain(String),

    #[error("hypergeometric series did not converge within {terms} terms (x = {x})")]
    NoConvergence { terms: usize, x: f64 },

    #[error("correlation table covers lags up to {available}, geometry needs {needed}")]
    LagOutOfRange { needed: usize, available: usize },

    #[error("unphysical covariance: delta1 = {delta1}, delta2 = {delta2}")]
    InvalidState { delta1: f64, delta2: f64 },

    #[error("quadrature on [{a}, {b}] stopped at error estimate {error:e} (target {target:e})")]
    Quadrature {
        a: f64,
        b: f64,
        error: f64,
        target: f64,
    },

    #[error("tail estimate did not stabilize up to cutoff {cutoff} (last change {change:e})")]
    TailUnstable { cutoff: f64, change: f64 },

    #[error("momentum propagator diverges logarithmically at r = {r} (window edges coincide)")]
    LogDivergent { r: f64 },
}

/// Coarse classification used to map failures onto process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Bad input: out-of-range parameters, malformed specs.
    Domain,
    /// A numerical routine failed on valid input.
    Numerical,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Domain(_) | Error::LagOutOfRange { .. } => ErrorKind::Domain,
            _ => ErrorKind::Numerical,
        }
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
