use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("pfm: {0}")]
    Pfm(#[from] PfmError),

    #[error("invalid environment map: {0}")]
    InvalidMap(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("non-finite value in {0}")]
    NonFinite(String),

    #[error("negative density {value} at sample {index}")]
    NegativeDensity { index: usize, value: f64 },

    #[error("field has {field} blend weights but light map stack has {stack} exponents")]
    ExponentMismatch { field: usize, stack: usize },

    #[error("weights: {0}")]
    Weights(String),

    #[error("layer {layer}: expected input of length {expected}, got {actual}")]
    LayerMismatch {
        layer: String,
        expected: usize,
        actual: usize,
    },

    #[error("scene: {0}")]
    Scene(String),

    #[error("{path}: {source}")]
    File {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("png: {0}")]
    Png(#[from] png::EncodingError),
}

impl Error {
    pub fn file(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::File {
            path: path.into(),
            source,
        }
    }
}

/// Failures while decoding a portable float map.
#[derive(Debug, Error, PartialEq)]
pub enum PfmError {
    #[error("unsupported grayscale PFM (header \"Pf\")")]
    Grayscale,

    #[error("malformed header at byte {offset}: {reason}")]
    Header { offset: usize, reason: String },

    #[error("payload size mismatch: expected {expected} bytes for {width}x{height}, found {actual}")]
    PayloadSize {
        width: usize,
        height: usize,
        expected: usize,
        actual: usize,
    },

    #[error("NaN in payload at pixel ({x}, {y}) channel {channel}")]
    NaN { x: usize, y: usize, channel: usize },
}
