use alloc::string::String;

/// Errors raised by the numerical kernel and the dynamics built on it.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("numerical failure in {routine}: {detail}")]
    Numerical {
        routine: &'static str,
        detail: String,
    },

    /// A time-local rate or an ODE right-hand side is singular at `time`.
    #[error("singularity at t = {time}")]
    Singularity { time: f64 },

    /// The inverse of the map at `time` does not exist, so intermediate
    /// propagators starting there are undefined.
    #[error("intermediate propagator undefined: map not invertible at s = {time}")]
    UndefinedPropagator { time: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("insufficient samples: conditioning event observed {observed} times, need {required}")]
    InsufficientSamples { observed: u64, required: u64 },

    /// Adaptive quadrature did not converge on `[a, b]`; the integrand is
    /// likely singular there.
    #[error("quadrature did not converge on [{a}, {b}] (divergence candidate)")]
    Divergence { a: f64, b: f64 },

    #[error("consistency check failed: {0}")]
    Consistency(String),
}

pub type Result<T> = core::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn numerical(routine: &'static str, detail: impl Into<String>) -> Self {
        Error::Numerical {
            routine,
            detail: detail.into(),
        }
    }
}
