use thiserror::Error;

/// Errors surfaced by the library.
///
/// The variants follow the failure taxonomy used throughout: malformed
/// inputs (`Format`, `Value`, `Length`, `Usage`, `Range`), problem sizes
/// beyond the configured caps (`Capacity`), and solver failures
/// (`Numeric`, `Resolution`, `FlatMaximum`).
#[derive(Debug, Error)]
pub enum Error {
    #[error("format error: {0}")]
    Format(String),

    #[error("value error: {0}")]
    Value(String),

    #[error("length error: {0}")]
    Length(String),

    #[error("range error: {0}")]
    Range(String),

    #[error("usage error: {0}")]
    Usage(String),

    #[error("capacity error: {0}")]
    Capacity(String),

    #[error("numeric error: {msg} (residual {residual:e})")]
    Numeric { msg: String, residual: f64 },

    #[error("resolution error: {0}")]
    Resolution(String),

    #[error("flat maximum at t = {t}: derivatives up to order 6 are below threshold")]
    FlatMaximum { t: f64 },
}

impl Error {
    /// Stable machine-readable tag for each error class.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Format(_) => "format",
            Error::Value(_) => "value",
            Error::Length(_) => "length",
            Error::Range(_) => "range",
            Error::Usage(_) => "usage",
            Error::Capacity(_) => "capacity",
            Error::Numeric { .. } => "numeric",
            Error::Resolution(_) => "resolution",
            Error::FlatMaximum { .. } => "flat-maximum",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
