//! Leaf shapes: smoothed concave polygons, rectangles and disks.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::delaunay::delaunay;
use super::hull::{concave_hull, Polygon};
use super::points::sample_points_in_disk;
use super::raster::{rasterize, rasterize_disk};
use crate::blur::blur_field;
use crate::error::{Error, Result};
use crate::image::Mask;
use crate::rng::uniform;

/// Binary leaf footprint. Mask pixel `(i, j)` lands on canvas pixel
/// `(cx + offset.0 + i, cy + offset.1 + j)` for a leaf centered on `(cx, cy)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ShapeMask {
    pub mask: Mask,
    pub offset: (i64, i64),
    pub nominal_radius: f64,
}

impl ShapeMask {
    pub fn width(&self) -> usize {
        self.mask.width()
    }

    pub fn height(&self) -> usize {
        self.mask.height()
    }

    pub fn area(&self) -> usize {
        self.mask.count()
    }

    /// Crops to the tight bounding box of the foreground. Empty masks become
    /// 0×0.
    pub fn tightened(self) -> ShapeMask {
        match self.mask.bounding_box() {
            Some((x0, y0, w, h)) => ShapeMask {
                mask: self.mask.crop(x0, y0, w, h),
                offset: (self.offset.0 + x0 as i64, self.offset.1 + y0 as i64),
                nominal_radius: self.nominal_radius,
            },
            None => ShapeMask {
                mask: Mask::new(0, 0),
                offset: self.offset,
                nominal_radius: self.nominal_radius,
            },
        }
    }

    /// Pads with `pad` empty pixels on every side.
    fn padded(&self, pad: usize) -> ShapeMask {
        let (w, h) = (self.width(), self.height());
        let mask = Mask::from_fn(w + 2 * pad, h + 2 * pad, |x, y| {
            x >= pad && y >= pad && x < w + pad && y < h + pad && self.mask.get(x - pad, y - pad)
        });
        ShapeMask {
            mask,
            offset: (self.offset.0 - pad as i64, self.offset.1 - pad as i64),
            nominal_radius: self.nominal_radius,
        }
    }
}

/// Gaussian blur of the mask followed by thresholding at 1/2 (values
/// `>= 0.5` are foreground). The result is tightened and may be empty.
pub fn smooth_mask(m: &ShapeMask, sigma_s: f64) -> ShapeMask {
    if sigma_s <= 0.0 {
        return m.clone();
    }
    let pad = (3.0 * sigma_s).ceil() as usize + 1;
    let padded = m.padded(pad);
    let blurred = blur_field(&padded.mask.to_field(), sigma_s);
    let mask = Mask::from_fn(blurred.width(), blurred.height(), |x, y| {
        blurred.get(x, y) >= 0.5
    });
    ShapeMask { mask, ..padded }.tightened()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ShapeKind {
    Polygon,
    Rectangle,
    Disk,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ShapeMix {
    pub polygon: f64,
    pub rectangle: f64,
    pub disk: f64,
}

impl Default for ShapeMix {
    fn default() -> Self {
        Self {
            polygon: 2.0 / 3.0,
            rectangle: 1.0 / 6.0,
            disk: 1.0 / 6.0,
        }
    }
}

impl ShapeMix {
    pub fn disks_only() -> Self {
        Self {
            polygon: 0.0,
            rectangle: 0.0,
            disk: 1.0,
        }
    }

    pub fn pick(&self, u: f64) -> ShapeKind {
        let total = self.polygon + self.rectangle + self.disk;
        let u = u * total;
        if u < self.polygon {
            ShapeKind::Polygon
        } else if u < self.polygon + self.rectangle {
            ShapeKind::Rectangle
        } else {
            ShapeKind::Disk
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ShapeParams {
    /// Inclusive range for the number of points of polygon shapes.
    pub n_points: [usize; 2],
    pub alpha: [f64; 2],
    pub sigma_s: [f64; 2],
    pub p_smooth: f64,
    /// Probability that a polygon's hull may also open interior holes.
    pub p_holes: f64,
    /// Resampling attempts when smoothing disconnects or erases a polygon.
    pub max_smooth_retries: usize,
    pub mix: ShapeMix,
}

impl Default for ShapeParams {
    fn default() -> Self {
        Self {
            n_points: [10, 100],
            alpha: [0.2, 0.6],
            sigma_s: [1.0, 10.0],
            p_smooth: 0.5,
            p_holes: 0.2,
            max_smooth_retries: 5,
            mix: ShapeMix::default(),
        }
    }
}

impl ShapeParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.n_points[0] < 3 || self.n_points[0] > self.n_points[1] {
            return bad(format!("shape n_points range {:?} invalid", self.n_points));
        }
        if !(0.0..=1.0).contains(&self.alpha[0]) || self.alpha[0] > self.alpha[1] || self.alpha[1] > 1.0 {
            return bad(format!("shape alpha range {:?} invalid", self.alpha));
        }
        if self.sigma_s[0] < 0.0 || self.sigma_s[0] > self.sigma_s[1] {
            return bad(format!("shape sigma_s range {:?} invalid", self.sigma_s));
        }
        for (name, p) in [("p_smooth", self.p_smooth), ("p_holes", self.p_holes)] {
            if !(0.0..=1.0).contains(&p) {
                return bad(format!("shape {name} = {p} outside [0, 1]"));
            }
        }
        let m = &self.mix;
        if m.polygon < 0.0 || m.rectangle < 0.0 || m.disk < 0.0 || m.polygon + m.rectangle + m.disk <= 0.0 {
            return bad("shape mix weights must be non-negative with a positive sum".into());
        }
        Ok(())
    }
}

/// Canvas side and center used to rasterize a shape of bounding radius `r`.
fn frame(radius: f64) -> (usize, f64) {
    let side = 2 * radius.ceil() as usize + 4;
    (side, side as f64 / 2.0)
}

fn from_canvas(mask: Mask, side: usize, radius: f64) -> ShapeMask {
    let half = (side / 2) as i64;
    ShapeMask {
        mask,
        offset: (-half, -half),
        nominal_radius: radius,
    }
    .tightened()
}

/// Rasterizes a polygon given in leaf-centered coordinates.
pub fn polygon_mask(poly: &Polygon, radius: f64) -> Result<ShapeMask> {
    let (side, c) = frame(radius);
    let shifted = poly.map(|p| [p[0] + c, p[1] + c]);
    let mask = rasterize(&shifted, side, side)?;
    Ok(from_canvas(mask, side, radius))
}

pub fn disk_mask(radius: f64) -> ShapeMask {
    let (side, c) = frame(radius);
    from_canvas(rasterize_disk([c, c], radius, side, side), side, radius)
}

/// Rectangle with half-diagonal `radius`, diagonal angle `phi` and
/// orientation `theta`.
pub fn rectangle_polygon(radius: f64, phi: f64, theta: f64) -> Polygon {
    let (hw, hh) = (radius * phi.cos(), radius * phi.sin());
    let (s, c) = theta.sin_cos();
    Polygon::from_outer(
        [[-hw, -hh], [hw, -hh], [hw, hh], [-hw, hh]]
            .iter()
            .map(|p| [c * p[0] - s * p[1], s * p[0] + c * p[1]])
            .collect(),
    )
}

/// Concave-hull polygon of `n` random points, scaled so its farthest vertex
/// sits at `radius`.
pub fn random_polygon<R: Rng + ?Sized>(sp: &ShapeParams, radius: f64, rng: &mut R) -> Result<Polygon> {
    let n = rng.random_range(sp.n_points[0]..=sp.n_points[1]);
    let alpha = uniform(rng, sp.alpha);
    let holes = rng.random::<f64>() < sp.p_holes;
    let points = sample_points_in_disk(n, 1.0, rng)?;
    let tri = delaunay(&points)?;
    let hull = concave_hull(&tri, alpha, holes);
    let scale = radius / hull.polygon.circumradius();
    Ok(hull.polygon.map(|p| [p[0] * scale, p[1] * scale]))
}

fn polygon_shape<R: Rng + ?Sized>(sp: &ShapeParams, radius: f64, rng: &mut R) -> Result<ShapeMask> {
    let smooth = rng.random::<f64>() < sp.p_smooth;
    let mut last = None;
    for _ in 0..=sp.max_smooth_retries {
        let poly = random_polygon(sp, radius, rng)?;
        let raw = polygon_mask(&poly, radius)?;
        // Sub-pixel necks can split the raster; keep the main body.
        let raw = ShapeMask {
            mask: raw.mask.largest_component(),
            ..raw
        }
        .tightened();
        if !smooth {
            return Ok(raw);
        }
        let sigma = uniform(rng, sp.sigma_s);
        let smoothed = smooth_mask(&raw, sigma);
        if smoothed.area() > 0 && smoothed.mask.components() == 1 {
            return Ok(smoothed);
        }
        last = Some(raw);
    }
    Ok(last.expect("at least one attempt"))
}

pub fn sample_shape_of_kind<R: Rng + ?Sized>(
    kind: ShapeKind,
    sp: &ShapeParams,
    radius: f64,
    rng: &mut R,
) -> Result<ShapeMask> {
    if !(radius > 0.0) {
        return Err(Error::InvalidParameter(format!("shape radius must be positive, got {radius}")));
    }
    let shape = match kind {
        ShapeKind::Polygon => polygon_shape(sp, radius, rng)?,
        ShapeKind::Rectangle => {
            let phi = rng.random_range(std::f64::consts::PI / 16.0..=7.0 * std::f64::consts::PI / 16.0);
            let theta = rng.random_range(0.0..std::f64::consts::PI);
            polygon_mask(&rectangle_polygon(radius, phi, theta), radius)?
        }
        ShapeKind::Disk => disk_mask(radius),
    };
    if shape.area() == 0 {
        // Only reachable for radii well below one pixel.
        return Ok(ShapeMask {
            mask: Mask::from_fn(1, 1, |_, _| true),
            offset: (0, 0),
            nominal_radius: radius,
        });
    }
    Ok(shape)
}

/// Draws the shape family from `sp.mix`, then the shape itself.
pub fn sample_shape<R: Rng + ?Sized>(sp: &ShapeParams, radius: f64, rng: &mut R) -> Result<(ShapeKind, ShapeMask)> {
    let kind = sp.mix.pick(rng.random::<f64>());
    Ok((kind, sample_shape_of_kind(kind, sp, radius, rng)?))
}
