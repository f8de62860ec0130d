//! Dead-leaves stacking with coverage control.
//!
//! Leaves are drawn one after another and each new leaf falls *under* the
//! ones already placed: only still-uncovered pixels receive its texture.
//! Leaf `i` of a layer owns the RNG stream `derive_seed(layer_seed, i)`, so
//! a leaf that would be fully hidden can be skipped without disturbing any
//! other leaf.

use rand::Rng;

use crate::color::{sample_power_law_rng, ColorSource, PowerLawParams};
use crate::error::{Error, Result};
use crate::geometry::{sample_shape, ShapeKind, ShapeMask, ShapeParams};
use crate::image::{ColorSpace, Mask, RasterImage};
use crate::rng::child_rng;
use crate::textures::{render_texture, sample_texture_spec, TextureKind, TextureParams};

/// Hard cap on the number of leaves drawn for one layer.
pub const MAX_LEAVES: usize = 100_000;

const TILE: usize = 8;

/// Per-leaf parameters of one stacking run.
#[derive(Clone, Debug, PartialEq)]
pub struct StackParams {
    pub radius: PowerLawParams,
    pub shape: ShapeParams,
    pub texture: TextureParams,
    pub max_leaves: usize,
}

impl Default for StackParams {
    fn default() -> Self {
        Self {
            radius: PowerLawParams::default(),
            shape: ShapeParams::default(),
            texture: TextureParams::default(),
            max_leaves: MAX_LEAVES,
        }
    }
}

/// Summary of one visible leaf.
#[derive(Clone, Debug, PartialEq)]
pub struct LeafRecord {
    pub index: usize,
    pub center: (f64, f64),
    pub radius: f64,
    pub shape: ShapeKind,
    pub texture: TextureKind,
    pub visible_pixels: usize,
}

/// A partially covered leaf stack at one depth plane. The stack is zero
/// outside `mask`.
#[derive(Clone, Debug)]
pub struct SceneLayer {
    pub stack: RasterImage,
    pub mask: Mask,
    pub coverage_target: f64,
    /// Per pixel, `1 +` the index of the leaf that painted it, or 0.
    pub labels: Vec<u32>,
    /// Leaves drawn, visible or not.
    pub leaves_drawn: usize,
    pub visible: Vec<LeafRecord>,
}

impl SceneLayer {
    pub fn width(&self) -> usize {
        self.mask.width()
    }

    pub fn coverage(&self) -> f64 {
        let n = self.mask.data().len();
        if n == 0 {
            1.0
        } else {
            self.mask.count() as f64 / n as f64
        }
    }
}

struct Canvas {
    w: usize,
    stack: RasterImage,
    mask: Mask,
    labels: Vec<u32>,
    covered: usize,
    tiles_x: usize,
    /// Uncovered pixels per `TILE`×`TILE` tile.
    open: Vec<usize>,
}

impl Canvas {
    fn new(w: usize) -> Self {
        let tiles_x = w.div_ceil(TILE);
        let mut open = vec![0; tiles_x * tiles_x];
        for ty in 0..tiles_x {
            for tx in 0..tiles_x {
                let tw = TILE.min(w - tx * TILE);
                let th = TILE.min(w - ty * TILE);
                open[ty * tiles_x + tx] = tw * th;
            }
        }
        Self {
            w,
            stack: RasterImage::new(w, w, 3, ColorSpace::Lab),
            mask: Mask::new(w, w),
            labels: vec![0; w * w],
            covered: 0,
            tiles_x,
            open,
        }
    }

    /// Whether any pixel of the clipped box `[x0, x1) × [y0, y1)` may be open.
    fn box_has_open(&self, x0: usize, y0: usize, x1: usize, y1: usize) -> bool {
        if x0 >= x1 || y0 >= y1 {
            return false;
        }
        let (tx0, tx1) = (x0 / TILE, (x1 - 1) / TILE);
        let (ty0, ty1) = (y0 / TILE, (y1 - 1) / TILE);
        (ty0..=ty1).any(|ty| (tx0..=tx1).any(|tx| self.open[ty * self.tiles_x + tx] > 0))
    }

    fn clip(&self, lo: i64, len: usize) -> (usize, usize) {
        let a = lo.clamp(0, self.w as i64) as usize;
        let b = (lo + len as i64).clamp(0, self.w as i64) as usize;
        (a, b)
    }
}

/// Fills a `w`×`w` layer until at least a fraction `p` of it is covered.
/// `layer_seed` drives every random choice.
pub fn leaves_stack(p: f64, w: usize, src: &ColorSource, sp: &StackParams, layer_seed: u64) -> Result<SceneLayer> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("coverage target {p} outside [0, 1]")));
    }
    if w == 0 {
        return Err(Error::InvalidParameter("layer width must be positive".into()));
    }
    let mut cv = Canvas::new(w);
    let total = (w * w) as f64;
    let mut visible = Vec::new();
    let mut drawn = 0;
    while (cv.covered as f64) / total < p {
        if drawn >= sp.max_leaves {
            return Err(Error::NonTermination {
                target: p,
                coverage: cv.covered as f64 / total,
                leaves: drawn,
            });
        }
        let index = drawn;
        drawn += 1;
        let mut rng = child_rng(layer_seed, index as u64);
        let cx = rng.random_range(0.0..w as f64);
        let cy = rng.random_range(0.0..w as f64);
        let radius = sample_power_law_rng(&sp.radius, &mut rng)?;

        // Shapes never leave the disk of their nominal radius by more than
        // the rasterization frame margin.
        let reach = radius.ceil() as i64 + 3;
        let (icx, icy) = (cx.floor() as i64, cy.floor() as i64);
        let (bx0, bx1) = cv.clip(icx - reach, 2 * reach as usize + 1);
        let (by0, by1) = cv.clip(icy - reach, 2 * reach as usize + 1);
        if !cv.box_has_open(bx0, by0, bx1, by1) {
            continue;
        }

        let (kind, shape) = sample_shape(&sp.shape, radius, &mut rng)?;
        if let Some(rec) = place_leaf(&mut cv, index, (icx, icy), &shape, src, &sp.texture, &mut rng)? {
            visible.push(LeafRecord {
                center: (cx, cy),
                radius,
                shape: kind,
                ..rec
            });
        }
    }
    Ok(SceneLayer {
        stack: cv.stack,
        mask: cv.mask,
        coverage_target: p,
        labels: cv.labels,
        leaves_drawn: drawn,
        visible,
    })
}

fn place_leaf<R: Rng + ?Sized>(
    cv: &mut Canvas,
    index: usize,
    center: (i64, i64),
    shape: &ShapeMask,
    src: &ColorSource,
    tp: &TextureParams,
    rng: &mut R,
) -> Result<Option<LeafRecord>> {
    let ox = center.0 + shape.offset.0;
    let oy = center.1 + shape.offset.1;
    let (x0, x1) = cv.clip(ox, shape.width());
    let (y0, y1) = cv.clip(oy, shape.height());
    if !cv.box_has_open(x0, y0, x1, y1) {
        return Ok(None);
    }
    let mut fresh = Vec::new();
    let (mut fx0, mut fy0, mut fx1, mut fy1) = (usize::MAX, usize::MAX, 0, 0);
    for y in y0..y1 {
        for x in x0..x1 {
            let (mx, my) = ((x as i64 - ox) as usize, (y as i64 - oy) as usize);
            if shape.mask.get(mx, my) && !cv.mask.get(x, y) {
                fresh.push((x, y));
                fx0 = fx0.min(x);
                fy0 = fy0.min(y);
                fx1 = fx1.max(x + 1);
                fy1 = fy1.max(y + 1);
            }
        }
    }
    if fresh.is_empty() {
        return Ok(None);
    }
    // The texture only spans the visible part of the leaf.
    let (tw, th) = (fx1 - fx0, fy1 - fy0);
    let spec = sample_texture_spec(tp, src, tw, th, rng);
    let tex = render_texture(&spec, src, tw, th)?;
    for &(x, y) in &fresh {
        for c in 0..3 {
            cv.stack.set(x, y, c, tex.get(x - fx0, y - fy0, c));
        }
        cv.mask.set(x, y, true);
        cv.labels[y * cv.w + x] = index as u32 + 1;
        cv.open[(y / TILE) * cv.tiles_x + x / TILE] -= 1;
    }
    cv.covered += fresh.len();
    Ok(Some(LeafRecord {
        index,
        center: (0.0, 0.0),
        radius: 0.0,
        shape: ShapeKind::Disk,
        texture: spec.kind(),
        visible_pixels: fresh.len(),
    }))
}
