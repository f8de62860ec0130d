//! Depth-of-field fusion.
//!
//! `(B, g_B) ⊕ (F, g_F, M) = (B ∗ g_B)(1 − M ∗ g_B ∗ g_F) + F ∗ g_F`, with
//! `F` zero outside its support `M`. Kernels are Gaussians given by their
//! std; a std of zero is the identity kernel and skips the convolution, so
//! in-focus planes composite exactly.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::blur::blur_plane64;
use crate::color::sample_rising_power;
use crate::error::{Error, Result};
use crate::image::{Image64, Mask};

/// Blur stds of the front (`sigma1`) and back (`sigma3`) planes; the middle
/// plane is in focus.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DofParams {
    pub sigma1: f64,
    pub sigma3: f64,
}

impl DofParams {
    pub fn in_focus() -> Self {
        Self { sigma1: 0.0, sigma3: 0.0 }
    }

    /// One std from the density `∝ σ^exponent` on `[0, sigma_max]`, shared by
    /// front and back.
    pub fn sample<R: Rng + ?Sized>(sigma_max: f64, exponent: f64, rng: &mut R) -> Self {
        let s = sample_rising_power(sigma_max, exponent, rng.random::<f64>());
        Self { sigma1: s, sigma3: s }
    }
}

fn blurred(img: &Image64, sigma: f64) -> Image64 {
    let mut out = img.clone();
    if sigma > 0.0 {
        let (w, h) = (out.width(), out.height());
        for c in 0..out.channels() {
            blur_plane64(out.plane_mut(c), w, h, sigma);
        }
    }
    out
}

pub fn dof_compose(b: &Image64, sigma_b: f64, f: &Image64, sigma_f: f64, m: &Mask) -> Result<Image64> {
    if !b.same_shape(f) || m.width() != b.width() || m.height() != b.height() {
        return Err(Error::DimensionMismatch(format!(
            "depth fusion of {}x{}x{} background, {}x{}x{} foreground and {}x{} mask",
            b.width(),
            b.height(),
            b.channels(),
            f.width(),
            f.height(),
            f.channels(),
            m.width(),
            m.height()
        )));
    }
    let (w, h) = (b.width(), b.height());
    let mut extinction: Vec<f64> = m.data().iter().map(|&v| if v { 1.0 } else { 0.0 }).collect();
    blur_plane64(&mut extinction, w, h, sigma_b);
    blur_plane64(&mut extinction, w, h, sigma_f);
    let bb = blurred(b, sigma_b);
    let ff = blurred(f, sigma_f);
    let mut out = Image64::new(w, h, b.channels(), b.space());
    for c in 0..b.channels() {
        let (pb, pf) = (bb.plane(c), ff.plane(c));
        for (i, o) in out.plane_mut(c).iter_mut().enumerate() {
            *o = pb[i] * (1.0 - extinction[i]) + pf[i];
        }
    }
    Ok(out)
}

/// `[(I3, G_σ3) ⊕ (I2, δ, M2), δ] ⊕ (I1, G_σ1, M1)`.
pub fn fuse_three_planes(
    i3: &Image64,
    i2: &Image64,
    m2: &Mask,
    i1: &Image64,
    m1: &Mask,
    d: &DofParams,
) -> Result<Image64> {
    let back = dof_compose(i3, d.sigma3, i2, 0.0, m2)?;
    dof_compose(&back, 0.0, i1, d.sigma1, m1)
}
