//! Anti-aliased integer downscaling.

use crate::blur::blur_plane64;
use crate::error::{Error, Result};
use crate::image::Image64;

/// Pre-blur std used for a factor of 2.
pub const DOWNSCALE_SIGMA: f64 = 0.7;

/// Gaussian pre-blur of std `sigma`, then averaging of `factor`×`factor`
/// blocks (bilinear sampling at the centers of the output pixels).
pub fn downscale(img: &Image64, factor: usize, sigma: f64) -> Result<Image64> {
    if factor == 0 {
        return Err(Error::InvalidParameter("downscale factor must be positive".into()));
    }
    let (w, h) = (img.width(), img.height());
    if w % factor != 0 || h % factor != 0 {
        return Err(Error::DimensionMismatch(format!(
            "{w}x{h} image is not divisible by downscale factor {factor}"
        )));
    }
    if factor == 1 {
        return Ok(img.clone());
    }
    let (ow, oh) = (w / factor, h / factor);
    let norm = 1.0 / (factor * factor) as f64;
    let mut out = Image64::new(ow, oh, img.channels(), img.space());
    let mut plane = vec![0.0; w * h];
    for c in 0..img.channels() {
        plane.copy_from_slice(img.plane(c));
        blur_plane64(&mut plane, w, h, sigma);
        let dst = out.plane_mut(c);
        for oy in 0..oh {
            for ox in 0..ow {
                let mut s = 0.0;
                for dy in 0..factor {
                    let row = &plane[(oy * factor + dy) * w + ox * factor..];
                    s += row[..factor].iter().sum::<f64>();
                }
                dst[oy * ow + ox] = s * norm;
            }
        }
    }
    Ok(out)
}

pub fn downscale2(img: &Image64) -> Result<Image64> {
    downscale(img, 2, DOWNSCALE_SIGMA)
}
