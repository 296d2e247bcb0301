use std::io;
use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("{path}: png decode failed: {source}")]
    PngDecode {
        path: PathBuf,
        #[source]
        source: png::DecodingError,
    },

    #[error("png encode failed: {0}")]
    PngEncode(#[from] png::EncodingError),

    #[error("{path}: unsupported png format ({detail}); expected 8-bit grayscale or indexed")]
    UnsupportedFormat { path: PathBuf, detail: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("{0}")]
    Validation(String),

    #[error("{0}")]
    Sequence(String),

    #[error("dimension mismatch: expected {expected:?}, got {actual:?}")]
    Dimension {
        expected: (u32, u32),
        actual: (u32, u32),
    },

    #[error("no color for label {0}")]
    MissingColor(u8),

    #[error("label id space exhausted: more than 255 distinct objects")]
    IdSpaceExhausted,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
