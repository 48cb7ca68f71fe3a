use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A parameter violates a type invariant.
    #[error("invalid {what}: {reason}")]
    Invalid { what: &'static str, reason: String },

    /// The truncated basis misses too much of the packet.
    #[error("truncation window [{n_min}, {n_max}] captures only {captured_norm} of the norm")]
    Truncation {
        n_min: u32,
        n_max: u32,
        captured_norm: f64,
    },

    /// Adaptive quadrature of an expansion coefficient did not converge.
    #[error("quadrature for c_{n} did not converge (error estimate {error:e})")]
    Quadrature { n: u32, error: f64 },

    #[error("malformed CSV at line {line}: {reason}")]
    Csv { line: usize, reason: String },
}

impl Error {
    pub(crate) fn invalid(what: &'static str, reason: impl Into<String>) -> Self {
        Error::Invalid {
            what,
            reason: reason.into(),
        }
    }

    /// True for failures of the numerics rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::Truncation { .. } | Error::Quadrature { .. })
    }
}
