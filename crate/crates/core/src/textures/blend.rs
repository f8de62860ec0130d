//! Two-scale texture blending.

use crate::error::{Error, Result};
use crate::image::{Field, RasterImage};

/// `β T1 + (1 - β) T2`, per pixel and channel.
pub fn two_scale_texture(t1: &RasterImage, t2: &RasterImage, beta: &Field) -> Result<RasterImage> {
    if !t1.same_shape(t2) || t1.width() != beta.width() || t1.height() != beta.height() {
        return Err(Error::DimensionMismatch(format!(
            "two-scale blend of {}x{}, {}x{} and mask {}x{}",
            t1.width(),
            t1.height(),
            t2.width(),
            t2.height(),
            beta.width(),
            beta.height()
        )));
    }
    let mut out = t1.clone();
    for c in 0..t1.channels() {
        let (a, b) = (t1.plane(c), t2.plane(c));
        for (i, o) in out.plane_mut(c).iter_mut().enumerate() {
            let w = beta.data()[i];
            *o = w * a[i] + (1.0 - w) * b[i];
        }
    }
    Ok(out)
}
