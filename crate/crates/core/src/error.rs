use thiserror::Error;

/// Errors raised by the filtering, noise, integration and experiment code.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An input value lies outside the domain of the evaluated function.
    #[error("domain error: {0}")]
    Domain(String),

    /// A parameter or argument violates a documented invariant.
    #[error("invalid argument: {0}")]
    Argument(String),

    /// A filter produced non-finite weights.
    #[error("filter diverged at iteration {iteration}")]
    Divergence { iteration: u64 },

    /// The kernel recursion hit a non-positive or vanishing Schur complement.
    #[error("numerical degeneracy: {0}")]
    Degenerate(String),

    /// The ODE integrator left the finite range.
    #[error("integration blew up at step {step}")]
    Integration { step: usize },

    /// A theory formula was evaluated outside the regime where it holds.
    #[error("out of regime: {0}")]
    OutOfRegime(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure_finite(what: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{what} must be finite, got {v}")))
    }
}

pub(crate) fn ensure_positive(what: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::Argument(format!("{what} must satisfy {what} > 0, got {v}")))
    }
}
