use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the range where the quantity is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// The parameter point sits on a boundary where the best constant is
    /// never attained (b = a + 1, or b = a < 0).
    #[error("constant not achieved: {0}")]
    NotAchieved(String),

    /// An iterative procedure failed to reach its tolerance.
    #[error("numeric failure: {message} (residual {residual:e})")]
    Numeric { message: String, residual: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

pub(crate) fn numeric<T>(msg: impl Into<String>, residual: f64) -> Result<T> {
    Err(Error::Numeric {
        message: msg.into(),
        residual,
    })
}
