//! Colored power-law noise.
//!
//! White noise is drawn from a color pool and the spectrum of its `L`
//! plane is reshaped to an amplitude of `|ν|^(-γ/2)` (so power falls as
//! `|ν|^-γ`). The drawn colors are then placed, whole, in the rank order of
//! the shaped plane. A few rounds of re-imposing the shaped magnitudes
//! (keeping phases) and re-ranking undo the flattening of the remap. Every
//! output pixel is a pool color and the per-channel marginals of the noise
//! are kept exactly.

use rand::Rng;
use rustfft::num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::color::ColorSource;
use crate::error::{Error, Result};
use crate::fft::{fft2d, signed_frequency};
use crate::image::{ColorSpace, RasterImage};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MicroParams {
    pub gamma: f64,
}

/// Amplitude filter `|ν|^(-γ/2)` on the DFT grid of a `width`×`height`
/// plane, with the DC gain fixed to 1.
pub fn spectral_filter(width: usize, height: usize, gamma: f64) -> Vec<f32> {
    let fx: Vec<f64> = (0..width).map(|k| signed_frequency(k, width)).collect();
    let fy: Vec<f64> = (0..height).map(|k| signed_frequency(k, height)).collect();
    let mut filter = Vec::with_capacity(width * height);
    for &vy in &fy {
        for &vx in &fx {
            let nu2 = vx * vx + vy * vy;
            filter.push(if nu2 == 0.0 { 1.0 } else { nu2.powf(-gamma / 4.0) as f32 });
        }
    }
    filter
}

/// Filters two real planes at once as the real and imaginary parts of one
/// complex plane; a real, even filter keeps them separate.
fn apply_filter_pair(a: &[f32], b: &[f32], width: usize, height: usize, filter: &[f32]) -> (Vec<f32>, Vec<f32>) {
    let mut buf: Vec<Complex<f32>> = a.iter().zip(b).map(|(&re, &im)| Complex::new(re, im)).collect();
    fft2d(&mut buf, width, height, false);
    for (c, &g) in buf.iter_mut().zip(filter) {
        *c *= g;
    }
    fft2d(&mut buf, width, height, true);
    let scale = 1.0 / (width * height) as f32;
    buf.iter().map(|c| (c.re * scale, c.im * scale)).unzip()
}

fn apply_filter(plane: &[f32], width: usize, height: usize, filter: &[f32]) -> Vec<f32> {
    let zeros = vec![0.0; plane.len()];
    apply_filter_pair(plane, &zeros, width, height, filter).0
}

/// Spectral shaping of one `n`×`n` plane, without the rank remap.
pub fn shape_spectrum(plane: &[f32], n: usize, gamma: f64) -> Vec<f32> {
    apply_filter(plane, n, n, &spectral_filter(n, n, gamma))
}

/// Order-preserving map from `f32` to `u32` (NaNs sort last).
#[inline]
fn ordered_bits(v: f32) -> u32 {
    let b = v.to_bits();
    if b >> 31 == 1 {
        !b
    } else {
        b | 0x8000_0000
    }
}

#[inline]
fn from_ordered_bits(b: u32) -> f32 {
    f32::from_bits(if b >> 31 == 1 { b & 0x7FFF_FFFF } else { !b })
}

/// Indices of `v` in ascending order, ties broken by position.
fn argsort(v: &[f32]) -> Vec<u32> {
    assert!(v.len() <= u32::MAX as usize);
    let mut keys: Vec<u64> = v
        .iter()
        .enumerate()
        .map(|(i, &x)| ((ordered_bits(x) as u64) << 32) | i as u64)
        .collect();
    keys.sort_unstable();
    keys.into_iter().map(|k| k as u32).collect()
}

/// `perm[i]` is the index of the element of `values` whose rank equals the
/// rank of `target[i]`. Ties are broken by position.
pub fn rank_permutation(target: &[f32], values: &[f32]) -> Vec<u32> {
    assert_eq!(target.len(), values.len());
    let mut perm = vec![0u32; target.len()];
    for (&t, &v) in argsort(target).iter().zip(&argsort(values)) {
        perm[t as usize] = v;
    }
    perm
}

/// Reorders `values` so their ranks follow those of `target`.
pub fn rank_remap(target: &[f32], values: &[f32]) -> Vec<f32> {
    let mut sorted: Vec<u32> = values.iter().map(|&v| ordered_bits(v)).collect();
    sorted.sort_unstable();
    let mut out = vec![0.0; target.len()];
    for (rank, &i) in argsort(target).iter().enumerate() {
        out[i as usize] = from_ordered_bits(sorted[rank]);
    }
    out
}

/// Alternations between the target spectrum magnitudes and the drawn
/// marginal. One remap alone flattens the spectrum by about 0.1 in slope.
pub const PROJECTION_ROUNDS: usize = 4;

/// Lab noise image of side `size` (a power of two) drawn from `src`.
pub fn micro_texture<R: Rng + ?Sized>(
    mp: &MicroParams,
    src: &ColorSource,
    size: usize,
    rng: &mut R,
) -> Result<RasterImage> {
    micro_texture_rect(mp, src, size, size, rng)
}

/// Rectangular variant of [`micro_texture`]; both sides must be powers of
/// two.
pub fn micro_texture_rect<R: Rng + ?Sized>(
    mp: &MicroParams,
    src: &ColorSource,
    width: usize,
    height: usize,
    rng: &mut R,
) -> Result<RasterImage> {
    if !width.is_power_of_two() || !height.is_power_of_two() {
        return Err(Error::InvalidParameter(format!(
            "micro texture size {width}x{height} is not a power of two"
        )));
    }
    if !mp.gamma.is_finite() || mp.gamma < 0.0 {
        return Err(Error::InvalidParameter(format!("micro texture gamma {}", mp.gamma)));
    }
    let noise: Vec<[f32; 3]> = (0..width * height).map(|_| src.draw_color(rng).to_array()).collect();
    let l: Vec<f32> = noise.iter().map(|c| c[0]).collect();
    let filter = spectral_filter(width, height, mp.gamma);
    let mut buf: Vec<Complex<f32>> = l.iter().map(|&v| Complex::new(v, 0.0)).collect();
    fft2d(&mut buf, width, height, false);
    for (c, &g) in buf.iter_mut().zip(&filter) {
        *c *= g;
    }
    let magnitudes: Vec<f32> = buf.iter().map(|c| c.norm()).collect();
    let l_order = argsort(&l);
    let mut perm = vec![0u32; l.len()];
    for round in 0..=PROJECTION_ROUNDS {
        if round > 0 {
            for (c, &k) in buf.iter_mut().zip(&perm) {
                *c = Complex::new(l[k as usize], 0.0);
            }
            fft2d(&mut buf, width, height, false);
            for (c, &m) in buf.iter_mut().zip(&magnitudes) {
                let n = c.norm();
                *c = if n > 0.0 { *c * (m / n) } else { Complex::new(m, 0.0) };
            }
        }
        fft2d(&mut buf, width, height, true);
        let projected: Vec<f32> = buf.iter().map(|c| c.re).collect();
        for (&t, &v) in argsort(&projected).iter().zip(&l_order) {
            perm[t as usize] = v;
        }
    }
    let mut img = RasterImage::new(width, height, 3, ColorSpace::Lab);
    for ch in 0..3 {
        for (out, &k) in img.plane_mut(ch).iter_mut().zip(&perm) {
            *out = noise[k as usize][ch];
        }
    }
    Ok(img)
}
