//! Truncated, renormalized Gaussian filtering with symmetric boundary
//! extension (`... c b a | a b c ...`).

use crate::image::{Field, RasterImage};

/// 1-D kernel of radius `ceil(3σ)`, normalized to unit sum. `σ <= 0` yields
/// the identity `[1.0]`.
pub fn gaussian_kernel(sigma: f64) -> Vec<f32> {
    gaussian_kernel64(sigma).into_iter().map(|w| w as f32).collect()
}

/// Double-precision version of [`gaussian_kernel`].
pub fn gaussian_kernel64(sigma: f64) -> Vec<f64> {
    if sigma <= 0.0 {
        return vec![1.0];
    }
    let radius = (3.0 * sigma).ceil() as isize;
    let weights: Vec<f64> = (-radius..=radius)
        .map(|i| (-((i * i) as f64) / (2.0 * sigma * sigma)).exp())
        .collect();
    let sum: f64 = weights.iter().sum();
    weights.iter().map(|w| w / sum).collect()
}

trait Sample: Copy + Default + std::ops::Mul<Output = Self> + std::ops::AddAssign + std::iter::Sum {}

impl Sample for f32 {}
impl Sample for f64 {}

/// Folds any integer index into `[0, n)` by mirror reflection with edge
/// repetition; works for offsets larger than `n`.
#[inline]
pub fn reflect_index(i: isize, n: usize) -> usize {
    let n = n as isize;
    let period = 2 * n;
    let m = i.rem_euclid(period);
    (if m >= n { period - 1 - m } else { m }) as usize
}

fn convolve_rows<T: Sample>(src: &[T], dst: &mut [T], width: usize, height: usize, kernel: &[T]) {
    let r = (kernel.len() / 2) as isize;
    let mut padded = vec![T::default(); width + 2 * r as usize];
    for y in 0..height {
        let row = &src[y * width..(y + 1) * width];
        for (j, p) in padded.iter_mut().enumerate() {
            *p = row[reflect_index(j as isize - r, width)];
        }
        let out = &mut dst[y * width..(y + 1) * width];
        for (x, o) in out.iter_mut().enumerate() {
            let window = &padded[x..x + kernel.len()];
            *o = window.iter().zip(kernel).map(|(&a, &k)| a * k).sum();
        }
    }
}

fn convolve_cols<T: Sample>(src: &[T], dst: &mut [T], width: usize, height: usize, kernel: &[T]) {
    let r = kernel.len() as isize / 2;
    let rows: Vec<usize> = (-r..height as isize + r)
        .map(|y| reflect_index(y, height))
        .collect();
    for y in 0..height {
        let out = &mut dst[y * width..(y + 1) * width];
        out.fill(T::default());
        for (k, &w) in kernel.iter().enumerate() {
            let sy = rows[y + k];
            let row = &src[sy * width..(sy + 1) * width];
            for (o, &v) in out.iter_mut().zip(row) {
                *o += w * v;
            }
        }
    }
}

/// Separable Gaussian blur of a single plane, in place.
pub fn blur_plane(data: &mut [f32], width: usize, height: usize, sigma: f64) {
    if sigma <= 0.0 || width == 0 || height == 0 {
        return;
    }
    let kernel = gaussian_kernel(sigma);
    let mut tmp = vec![0.0f32; data.len()];
    convolve_rows(data, &mut tmp, width, height, &kernel);
    convolve_cols(&tmp, data, width, height, &kernel);
}

/// Double-precision version of [`blur_plane`].
pub fn blur_plane64(data: &mut [f64], width: usize, height: usize, sigma: f64) {
    if sigma <= 0.0 || width == 0 || height == 0 {
        return;
    }
    let kernel = gaussian_kernel64(sigma);
    let mut tmp = vec![0.0f64; data.len()];
    convolve_rows(data, &mut tmp, width, height, &kernel);
    convolve_cols(&tmp, data, width, height, &kernel);
}

pub fn blur_field(field: &Field, sigma: f64) -> Field {
    let mut out = field.clone();
    let (w, h) = (out.width(), out.height());
    blur_plane(out.data_mut(), w, h, sigma);
    out
}

pub fn blur_image(img: &RasterImage, sigma: f64) -> RasterImage {
    let mut out = img.clone();
    let (w, h) = (out.width(), out.height());
    for c in 0..out.channels() {
        blur_plane(out.plane_mut(c), w, h, sigma);
    }
    out
}
