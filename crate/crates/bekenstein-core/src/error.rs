use alloc::string::String;

/// Errors raised by the numerical routines.
///
/// The variants map onto the failure classes the command line front end
/// distinguishes: bad input, violated preconditions, numerical breakdown and
/// violated properties.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid input: {0}")]
    Input(String),

    #[error("outside the domain: {0}")]
    Domain(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("ill-conditioned problem (condition number {0:e})")]
    IllConditioned(f64),

    #[error("numerical failure: {what} (residual {residual:e})")]
    Numerical { what: String, residual: f64 },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("property violated: {0}")]
    Property(String),
}

impl Error {
    pub(crate) fn numerical(what: impl Into<String>, residual: f64) -> Self {
        Error::Numerical { what: what.into(), residual }
    }

    /// True for failures caused by floating point breakdown rather than by
    /// the caller or by a violated inequality.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::Numerical { .. } | Error::IllConditioned(_))
    }
}

pub type Result<T> = core::result::Result<T, Error>;
