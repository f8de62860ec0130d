//! Planar homographies and perspective warps.

use nalgebra::{Matrix3, SMatrix, SVector, Vector3};
use serde::{Deserialize, Serialize};

use super::warp::bilinear;
use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::image::RasterImage;

/// Four source corners and the positions they map to.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HomographyCorners {
    pub src: [Point; 4],
    pub dst: [Point; 4],
}

impl HomographyCorners {
    /// Pixel-center corners of a `width`×`height` image, clockwise in image
    /// coordinates starting at the top-left.
    pub fn image_corners(width: usize, height: usize) -> [Point; 4] {
        let (w, h) = ((width.max(1) - 1) as f64, (height.max(1) - 1) as f64);
        [[0.0, 0.0], [w, 0.0], [w, h], [0.0, h]]
    }

    pub fn identity(width: usize, height: usize) -> Self {
        let c = Self::image_corners(width, height);
        Self { src: c, dst: c }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Homography(pub Matrix3<f64>);

impl Homography {
    pub fn apply(&self, p: Point) -> Point {
        let v = self.0 * Vector3::new(p[0], p[1], 1.0);
        [v[0] / v[2], v[1] / v[2]]
    }

    pub fn inverse(&self) -> Result<Homography> {
        self.0
            .try_inverse()
            .map(Homography)
            .ok_or_else(|| Error::Degenerate("singular homography".into()))
    }
}

fn cross(o: Point, a: Point, b: Point) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// True when the four points form a strictly convex quadrilateral in the
/// given order.
pub fn is_convex_quad(q: &[Point; 4]) -> bool {
    let signs: Vec<f64> = (0..4).map(|i| cross(q[i], q[(i + 1) % 4], q[(i + 2) % 4])).collect();
    let scale = q
        .iter()
        .flat_map(|p| p.iter())
        .fold(1.0f64, |m, v| m.max(v.abs()));
    let eps = 1e-9 * scale * scale;
    signs.iter().all(|&s| s > eps) || signs.iter().all(|&s| s < -eps)
}

/// Solves for `H` (with `h33 = 1`) mapping each `src[i]` to `dst[i]`.
pub fn solve_homography(c: &HomographyCorners) -> Result<Homography> {
    if !is_convex_quad(&c.src) || !is_convex_quad(&c.dst) {
        return Err(Error::Degenerate("homography corners are not a convex quadrilateral".into()));
    }
    let mut a = SMatrix::<f64, 8, 8>::zeros();
    let mut b = SVector::<f64, 8>::zeros();
    for i in 0..4 {
        let [x, y] = c.src[i];
        let [u, v] = c.dst[i];
        let r = 2 * i;
        a.row_mut(r)
            .copy_from_slice(&[x, y, 1.0, 0.0, 0.0, 0.0, -u * x, -u * y]);
        a.row_mut(r + 1)
            .copy_from_slice(&[0.0, 0.0, 0.0, x, y, 1.0, -v * x, -v * y]);
        b[r] = u;
        b[r + 1] = v;
    }
    let h = a
        .lu()
        .solve(&b)
        .ok_or_else(|| Error::Degenerate("homography system is singular".into()))?;
    Ok(Homography(Matrix3::new(h[0], h[1], h[2], h[3], h[4], h[5], h[6], h[7], 1.0)))
}

/// Resamples `img` so that its `src` corners land on `dst`: every output
/// pixel is pulled back through `H⁻¹` and read bilinearly, clamping to the
/// image edge.
pub fn perspective_warp(img: &RasterImage, corners: &HomographyCorners) -> Result<RasterImage> {
    let inv = solve_homography(corners)?.inverse()?;
    let (w, h) = (img.width(), img.height());
    let mut out = RasterImage::new(w, h, img.channels(), img.space());
    for y in 0..h {
        for x in 0..w {
            let [sx, sy] = inv.apply([x as f64, y as f64]);
            for c in 0..img.channels() {
                out.set(x, y, c, bilinear(img, c, sx, sy));
            }
        }
    }
    Ok(out)
}
