//! Grayscale deblocking toolkit.
//!
//! The crate simulates the lossy core of baseline JPEG (8×8 DCT plus
//! quality-scaled quantization) to produce blocky images with a known
//! original, removes the blocking with a two-stage spatial post-filter,
//! and measures the result with MSE/PSNR.
//!
//! * [`image`] and [`pgm`] hold the pixel model and binary PGM I/O.
//! * [`codec`] is the DCT/quantization simulator.
//! * [`deblock`] is the post-filter: uniform boundary smoothing followed by
//!   blocked-edge detection and intensity-weighted Gaussian filtering.
//! * [`metrics`] computes MSE and PSNR.
//! * [`harness`] generates synthetic fixtures and runs the quality matrix.

pub mod codec;
pub mod deblock;
pub mod error;
pub mod harness;
pub mod image;
pub mod metrics;
pub mod pgm;

pub use codec::{encode_decode, CodecConfig, QuantTable};
pub use deblock::{deblock_pipeline, DeblockConfig};
pub use error::{Error, Result};
pub use image::Image;
pub use metrics::{mse, psnr_from_mse, MetricsReport, Psnr};

/// Side length of a coding block.
pub const BLOCK: usize = 8;
