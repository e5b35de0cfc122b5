use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Tensor or layer shape disagreement.
    #[error("shape mismatch: {0}")]
    Shape(String),

    /// Invalid configuration or model specification.
    #[error("invalid spec: {0}")]
    Spec(String),

    /// A value left its numeric domain (NaN loss, non-positive normalizer).
    #[error("numeric domain error: {0}")]
    Numeric(String),

    /// Malformed file contents; `offset` is the first offending byte.
    #[error("parse error at byte {offset}: {what}")]
    Parse { offset: u64, what: String },

    /// Structural corruption detected at runtime (e.g. out-of-range unpool index).
    #[error("corrupt data: {0}")]
    Corrupt(String),

    /// Dataset is unusable for the requested operation.
    #[error("data error: {0}")]
    Data(String),

    /// Linear system is rank-deficient beyond the ridge jitter.
    #[error("singular system: {0}")]
    Singular(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("image error: {0}")]
    Image(#[from] image::ImageError),
}

impl Error {
    pub fn shape(msg: impl Into<String>) -> Self {
        Error::Shape(msg.into())
    }

    pub fn spec(msg: impl Into<String>) -> Self {
        Error::Spec(msg.into())
    }

    pub fn data(msg: impl Into<String>) -> Self {
        Error::Data(msg.into())
    }
}
