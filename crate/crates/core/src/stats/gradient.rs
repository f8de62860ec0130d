//! Gradient-magnitude histograms and their KL divergence.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::gray::Gray;
use crate::error::{Error, Result};

pub const GRAD_BINS: usize = 256;
pub const GRAD_MAX: f64 = 1.5;
pub const DEFAULT_PATCH: usize = 500;
pub const DEFAULT_PATCHES: usize = 1000;
pub const KL_EPSILON: f64 = 1e-10;

/// Histogram of `‖∇I‖₂` on `[0, range)` with uniform bins; larger values go
/// to the last bin.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GradHistogram {
    pub range: f64,
    pub counts: Vec<u64>,
}

impl GradHistogram {
    pub fn new(bins: usize, range: f64) -> Self {
        assert!((1..=1 << 16).contains(&bins), "bin count {bins} out of range");
        Self {
            range,
            counts: vec![0; bins],
        }
    }

    pub fn bins(&self) -> usize {
        self.counts.len()
    }

    pub fn bin_width(&self) -> f64 {
        self.range / self.bins() as f64
    }

    pub fn bin_edges(&self) -> Vec<f64> {
        (0..=self.bins()).map(|i| i as f64 * self.bin_width()).collect()
    }

    pub fn bin_of(&self, g: f64) -> usize {
        ((g / self.bin_width()).floor().max(0.0) as usize).min(self.bins() - 1)
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn densities(&self) -> Vec<f64> {
        let t = self.total().max(1) as f64;
        self.counts.iter().map(|&c| c as f64 / t).collect()
    }

    pub fn same_binning(&self, other: &GradHistogram) -> bool {
        self.bins() == other.bins() && self.range == other.range
    }

    pub fn merge(&mut self, other: &GradHistogram) -> Result<()> {
        if !self.same_binning(other) {
            return Err(Error::DimensionMismatch("histogram binnings differ".into()));
        }
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        Ok(())
    }

    /// Adds the forward-difference gradient norms of a window of `img`.
    pub fn accumulate(&mut self, img: &Gray, x0: usize, y0: usize, w: usize, h: usize) {
        let map = self.bin_map(img);
        self.accumulate_map(&map, img.width(), x0, y0, w, h);
    }

    /// Bin of the forward-difference gradient at every pixel that has a
    /// right and a lower neighbour, row-major with the image's stride.
    fn bin_map(&self, img: &Gray) -> Vec<u16> {
        let (iw, ih) = (img.width(), img.height());
        let d = img.data();
        let mut map = vec![0u16; iw * ih];
        for y in 0..ih.saturating_sub(1) {
            let row = &d[y * iw..(y + 1) * iw];
            let below = &d[(y + 1) * iw..(y + 2) * iw];
            let out = &mut map[y * iw..(y + 1) * iw];
            for x in 0..iw - 1 {
                let gx = row[x + 1] - row[x];
                let gy = below[x] - row[x];
                out[x] = self.bin_of((gx * gx + gy * gy).sqrt()) as u16;
            }
        }
        map
    }

    fn accumulate_map(&mut self, map: &[u16], stride: usize, x0: usize, y0: usize, w: usize, h: usize) {
        for y in y0..y0 + h.saturating_sub(1) {
            let row = &map[y * stride + x0..y * stride + x0 + w.saturating_sub(1)];
            for &b in row {
                self.counts[b as usize] += 1;
            }
        }
    }
}

/// Pooled gradient histogram over `n_patches` random `patch`×`patch`
/// windows, each from a uniformly chosen image. Images smaller than the
/// patch contribute whole.
pub fn gradient_hist<R: Rng + ?Sized>(
    images: &[Gray],
    patch: usize,
    n_patches: usize,
    rng: &mut R,
) -> Result<GradHistogram> {
    if images.is_empty() {
        return Err(Error::Empty("no images for gradient histogram".into()));
    }
    let mut hist = GradHistogram::new(GRAD_BINS, GRAD_MAX);
    let mut maps: Vec<Option<Vec<u16>>> = vec![None; images.len()];
    let mut warned = false;
    for _ in 0..n_patches {
        let k = rng.random_range(0..images.len());
        let img = &images[k];
        let map = maps[k].get_or_insert_with(|| hist.bin_map(img));
        if img.width() < patch || img.height() < patch {
            if !warned {
                log::warn!(
                    "image of {}x{} is smaller than the {patch}px patch; using the whole image",
                    img.width(),
                    img.height()
                );
                warned = true;
            }
            hist.accumulate_map(map, img.width(), 0, 0, img.width(), img.height());
            continue;
        }
        let x0 = rng.random_range(0..=img.width() - patch);
        let y0 = rng.random_range(0..=img.height() - patch);
        hist.accumulate_map(map, img.width(), x0, y0, patch, patch);
    }
    Ok(hist)
}

/// Histogram of every pixel of every image.
pub fn gradient_hist_full(images: &[Gray]) -> GradHistogram {
    let mut hist = GradHistogram::new(GRAD_BINS, GRAD_MAX);
    for img in images {
        hist.accumulate(img, 0, 0, img.width(), img.height());
    }
    hist
}

/// `Σ p ln(p / q)` in nats on densities smoothed by [`KL_EPSILON`] and
/// renormalized.
pub fn kl_divergence(p: &GradHistogram, q: &GradHistogram) -> Result<f64> {
    if !p.same_binning(q) {
        return Err(Error::DimensionMismatch(format!(
            "KL between {} bins on [0, {}) and {} bins on [0, {})",
            p.bins(),
            p.range,
            q.bins(),
            q.range
        )));
    }
    kl_densities(&p.densities(), &q.densities())
}

pub fn kl_densities(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() || p.is_empty() {
        return Err(Error::DimensionMismatch("density vectors differ in length".into()));
    }
    let smooth = |d: &[f64]| {
        let s: f64 = d.iter().map(|v| v + KL_EPSILON).sum();
        d.iter().map(|v| (v + KL_EPSILON) / s).collect::<Vec<f64>>()
    };
    let (p, q) = (smooth(p), smooth(q));
    Ok(p.iter().zip(&q).map(|(a, b)| a * (a / b).ln()).sum::<f64>().max(0.0))
}
