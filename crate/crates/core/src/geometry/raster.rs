//! Even–odd scanline fill sampled at pixel centers.

use super::hull::Polygon;
use super::points::Point;
use crate::error::{Error, Result};
use crate::image::Mask;

/// Fills `poly` (canvas pixel coordinates, pixel `(x, y)` centered at
/// `(x + 0.5, y + 0.5)`) into a `width`×`height` mask. Edges are half-open
/// in y so shared vertices are counted once.
pub fn rasterize(poly: &Polygon, width: usize, height: usize) -> Result<Mask> {
    if poly.is_empty() {
        return Err(Error::Empty("polygon has no ring with three vertices".into()));
    }
    let edges: Vec<(Point, Point)> = poly
        .rings
        .iter()
        .filter(|r| r.len() >= 3)
        .flat_map(|r| (0..r.len()).map(move |i| (r[i], r[(i + 1) % r.len()])))
        .filter(|(a, b)| a[1] != b[1])
        .collect();
    let mut mask = Mask::new(width, height);
    let mut xs: Vec<f64> = Vec::new();
    for y in 0..height {
        let yc = y as f64 + 0.5;
        xs.clear();
        for &(a, b) in &edges {
            let (lo, hi) = if a[1] < b[1] { (a, b) } else { (b, a) };
            if lo[1] <= yc && yc < hi[1] {
                let t = (yc - lo[1]) / (hi[1] - lo[1]);
                xs.push(lo[0] + t * (hi[0] - lo[0]));
            }
        }
        xs.sort_by(f64::total_cmp);
        for pair in xs.chunks_exact(2) {
            // Pixel centers inside [x_in, x_out).
            let start = (pair[0] - 0.5).ceil().max(0.0) as usize;
            let end = ((pair[1] - 0.5).ceil().max(0.0) as usize).min(width);
            for x in start..end {
                mask.set(x, y, true);
            }
        }
    }
    Ok(mask)
}

/// Pixels whose centers lie within `radius` of `center`.
pub fn rasterize_disk(center: Point, radius: f64, width: usize, height: usize) -> Mask {
    let r2 = radius * radius;
    Mask::from_fn(width, height, |x, y| {
        let dx = x as f64 + 0.5 - center[0];
        let dy = y as f64 + 0.5 - center[1];
        dx * dx + dy * dy <= r2
    })
}
