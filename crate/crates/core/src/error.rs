use thiserror::Error;

/// Errors raised by the numerical kernels and the file formats.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("ingestion error: {0}")]
    Ingestion(String),

    #[error("linear algebra error: {what} (residual {residual:.3e})")]
    LinearAlgebra { what: String, residual: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("ill-conditioned solve: residual {residual:.3e} exceeds {tolerance:.3e}")]
    Conditioning { residual: f64, tolerance: f64 },

    #[error("configuration error: {0}")]
    Configuration(String),

    #[error("solver blow-up at t = {t}")]
    BlowUp { t: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// True for errors caused by the caller's parameters rather than by the numerics.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::InvalidField(_) | Error::Ingestion(_) | Error::Domain(_) | Error::Configuration(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
