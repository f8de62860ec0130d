//! Procedural VibrantLeaves image synthesis and natural-image statistics.
//!
//! The generator stacks random leaves (complex shapes carrying procedural
//! textures) into three depth planes, fuses them with a depth-of-field
//! operator and downsamples the result. The [`stats`] module measures the
//! gradient histogram and radial power spectrum used to compare synthetic
//! corpora with natural photographs.

// Validation writes `!(x > 0.0)` so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod blur;
pub mod color;
pub mod compositing;
pub mod error;
pub mod export;
pub mod fft;
pub mod geometry;
pub mod image;
pub mod rng;
pub mod stats;
pub mod textures;

pub use error::{Error, Result};
