//! Seed derivation and the RNG type used throughout the generator.
//!
//! Every image, layer and leaf owns an independent ChaCha8 stream whose seed
//! is derived with [`derive_seed`]. The derivation is the SplitMix64 output
//! function applied to the `index + 1`-th state of a SplitMix64 sequence
//! started at `parent`:
//!
//! ```text
//! z = parent + (index + 1) * 0x9E3779B97F4A7C15   (wrapping)
//! z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//! z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//! seed = z ^ (z >> 31)
//! ```

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type VlRng = ChaCha8Rng;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
pub fn splitmix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of child stream `index` under `parent`.
#[inline]
pub fn derive_seed(parent: u64, index: u64) -> u64 {
    splitmix64(parent.wrapping_add(index.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)))
}

pub fn rng_from_seed(seed: u64) -> VlRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Stream `index` under `parent`.
pub fn child_rng(parent: u64, index: u64) -> VlRng {
    rng_from_seed(derive_seed(parent, index))
}

/// Uniform draw on the closed range `[lo, hi]`; `lo` when the range is empty.
pub fn uniform<R: Rng + ?Sized>(rng: &mut R, range: [f64; 2]) -> f64 {
    if range[1] > range[0] {
        rng.random_range(range[0]..=range[1])
    } else {
        range[0]
    }
}
