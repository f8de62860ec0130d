//! Turbulence displacement fields.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::blur::blur_field;
use crate::image::{Field, RasterImage};

/// A smoothed white-noise displacement: per-axis `N(0, 1)` noise, Gaussian
/// blurred with std `s`, multiplied by `t_scale`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WarpParams {
    pub s: f64,
    pub t_scale: f64,
    /// Seed of the noise stream, so a warp is reproducible from its parameters.
    pub seed: u64,
}

impl WarpParams {
    /// Amplitude giving a displacement of roughly `d` pixels RMS. Blurring
    /// unit white noise with a 2-D Gaussian of std `s` leaves a std of
    /// `1 / (2 √π s)`.
    pub fn with_rms(d: f64, s: f64, seed: u64) -> Self {
        Self {
            s,
            t_scale: d * 2.0 * std::f64::consts::PI.sqrt() * s,
            seed,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Displacement {
    pub dx: Field,
    pub dy: Field,
}

impl Displacement {
    pub fn zero(width: usize, height: usize) -> Self {
        Self {
            dx: Field::new(width, height),
            dy: Field::new(width, height),
        }
    }

    pub fn negated(&self) -> Self {
        Self {
            dx: self.dx.map(|v| -v),
            dy: self.dy.map(|v| -v),
        }
    }

    pub fn rms(&self) -> f64 {
        let n = self.dx.data().len().max(1) as f64;
        let s: f64 = self
            .dx
            .data()
            .iter()
            .zip(self.dy.data())
            .map(|(&a, &b)| (a as f64).powi(2) + (b as f64).powi(2))
            .sum();
        (s / n).sqrt()
    }
}

pub fn warp_field<R: Rng + ?Sized>(width: usize, height: usize, wp: &WarpParams, rng: &mut R) -> Displacement {
    let mut noise = || {
        let f = Field::from_fn(width, height, |_, _| rng.sample::<f32, _>(StandardNormal));
        let t = wp.t_scale as f32;
        blur_field(&f, wp.s).map(|v| v * t)
    };
    let dx = noise();
    let dy = noise();
    Displacement { dx, dy }
}

/// Snaps coordinates within `1e-9` of an integer, so that exact maps hit
/// pixel centers exactly.
#[inline]
pub(crate) fn snap(v: f64) -> f64 {
    let r = v.round();
    if (v - r).abs() < 1e-9 {
        r
    } else {
        v
    }
}

/// Bilinear sample of plane `c` at `(x, y)` with clamp-to-edge borders.
#[inline]
pub fn bilinear(img: &RasterImage, c: usize, x: f64, y: f64) -> f32 {
    let (w, h) = (img.width(), img.height());
    let x = snap(x).clamp(0.0, (w - 1) as f64);
    let y = snap(y).clamp(0.0, (h - 1) as f64);
    let x0 = x.floor() as usize;
    let y0 = y.floor() as usize;
    let x1 = (x0 + 1).min(w - 1);
    let y1 = (y0 + 1).min(h - 1);
    let fx = (x - x0 as f64) as f32;
    let fy = (y - y0 as f64) as f32;
    let p = img.plane(c);
    let a = p[y0 * w + x0];
    let b = p[y0 * w + x1];
    let cc = p[y1 * w + x0];
    let d = p[y1 * w + x1];
    if fx == 0.0 && fy == 0.0 {
        return a;
    }
    (a * (1.0 - fx) + b * fx) * (1.0 - fy) + (cc * (1.0 - fx) + d * fx) * fy
}

/// `out(x, y) = img(x + dx, y + dy)` by bilinear interpolation.
pub fn apply_displacement(img: &RasterImage, disp: &Displacement) -> RasterImage {
    let (w, h) = (img.width(), img.height());
    let mut out = RasterImage::new(w, h, img.channels(), img.space());
    for c in 0..img.channels() {
        for y in 0..h {
            for x in 0..w {
                let sx = x as f64 + disp.dx.get(x, y) as f64;
                let sy = y as f64 + disp.dy.get(x, y) as f64;
                out.set(x, y, c, bilinear(img, c, sx, sy));
            }
        }
    }
    out
}
