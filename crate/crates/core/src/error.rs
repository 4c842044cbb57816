use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),

    #[error("not a binary PGM file (magic {0:?})")]
    BadMagic(String),

    #[error("malformed PGM header: {0}")]
    MalformedHeader(String),

    #[error("unsupported maxval {0} (only 8-bit PGM is supported)")]
    UnsupportedMaxval(u32),

    #[error("truncated raster: expected {expected} bytes, found {found}")]
    TruncatedRaster { expected: usize, found: usize },

    #[error("not storage form: pixel {index} has value {value}")]
    NotStorageForm { index: usize, value: f64 },

    #[error("invalid dimensions {width}x{height}: {reason}")]
    Dimensions {
        width: usize,
        height: usize,
        reason: &'static str,
    },

    #[error("image dimensions differ: {0}x{1} vs {2}x{3}")]
    DimensionMismatch(usize, usize, usize, usize),

    #[error("quality {0} out of range 1..=100")]
    Quality(u32),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("edge descriptor out of range: {0}")]
    EdgeOutOfRange(String),

    #[error("negative MSE {0}")]
    NegativeMse(f64),

    #[error("{0}")]
    Harness(String),
}
