use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("source and receiver coincide (r = 0)")]
    CoincidentPoints,

    #[error("band too narrow for a Kramers-Kronig check: omega_max = {omega_max}, need at least {required}")]
    BandTooNarrow { omega_max: f64, required: f64 },

    #[error("operation requires the Voigt model (y = 2), got y = {0}")]
    NotVoigt(f64),

    #[error("ODE march failed at sample {index}: {reason}")]
    OdeFailure { index: usize, reason: String },

    #[error("receiver {receiver}: {source}")]
    Channel {
        receiver: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("config: {0}")]
    Config(String),

    #[error("check failed: {0}")]
    CheckFailed(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
