//! Pseudo-periodic interpolation fields.
//!
//! A 1-D profile repeats a sequence of `k` sinusoid periods `t_0..t_k`
//! (global period `T = Σ t_i`, each segment one full sine period). The
//! profile is clipped at `τ` (`max(F, τ)` rescaled back to `[-1, 1]`) and
//! sharpened by a logistic of growth rate `λ` rescaled to `[0, 1]`. Two-
//! dimensional fields multiply an independent profile along the rotated
//! `y` axis. Sampling coordinates may be displaced by a turbulence field.

use serde::{Deserialize, Serialize};

use super::warp::{warp_field, Displacement, WarpParams};
use crate::color::LabColor;
use crate::image::{ColorSpace, Field, RasterImage};
use crate::rng::rng_from_seed;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PeriodicParams {
    /// Period sequence along the rotated x axis.
    pub periods: Vec<f64>,
    /// Period sequence along the rotated y axis (used when `dims == 2`).
    pub periods_y: Vec<f64>,
    pub lambda: f64,
    pub theta: f64,
    pub tau: f64,
    pub dims: u8,
    pub warp: Option<WarpParams>,
}

impl PeriodicParams {
    /// Plain sinusoid of period `t` along x.
    pub fn sinusoid(t: f64) -> Self {
        Self {
            periods: vec![t],
            periods_y: vec![t],
            lambda: 1.0,
            theta: 0.0,
            tau: -1.0,
            dims: 1,
            warp: None,
        }
    }

    /// Field value at continuous position `(x, y)`, before any warp.
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        PeriodicEvaluator::new(self).eval(x, y)
    }
}

/// One axis of a field: the period sequence with its running offsets.
struct Profile {
    starts: Vec<f64>,
    periods: Vec<f64>,
    total: f64,
}

impl Profile {
    fn new(periods: &[f64]) -> Self {
        let mut starts = Vec::with_capacity(periods.len());
        let mut acc = 0.0;
        for &t in periods {
            starts.push(acc);
            acc += t;
        }
        Self {
            starts,
            periods: periods.to_vec(),
            total: acc,
        }
    }

    fn sequence(&self, x: f64) -> f64 {
        if self.periods.is_empty() || !(self.total > 0.0) {
            return 0.0;
        }
        let mut xt = x - self.total * (x / self.total).floor();
        if xt >= self.total {
            xt = 0.0;
        }
        let i = self.starts.partition_point(|&s| s <= xt).saturating_sub(1);
        let (start, t) = (self.starts[i], self.periods[i]);
        if xt >= start + t {
            return 0.0;
        }
        (std::f64::consts::TAU * (xt - start) / t).sin()
    }
}

/// Precomputed constants for evaluating a field at many points.
pub struct PeriodicEvaluator {
    cos: f64,
    sin: f64,
    x: Profile,
    y: Option<Profile>,
    tau: f64,
    lambda: f64,
    lo: f64,
    inv_range: f64,
}

fn logistic(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

impl PeriodicEvaluator {
    pub fn new(pp: &PeriodicParams) -> Self {
        let (sin, cos) = pp.theta.sin_cos();
        let lo = logistic(-pp.lambda);
        let hi = logistic(pp.lambda);
        Self {
            cos,
            sin,
            x: Profile::new(&pp.periods),
            y: (pp.dims >= 2).then(|| Profile::new(&pp.periods_y)),
            tau: pp.tau,
            lambda: pp.lambda,
            lo,
            inv_range: 1.0 / (hi - lo),
        }
    }

    #[inline]
    fn shape(&self, v: f64) -> f64 {
        let z = clip_rescale(v, self.tau);
        ((logistic(self.lambda * z) - self.lo) * self.inv_range).clamp(0.0, 1.0)
    }

    #[inline]
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let u = x * self.cos + y * self.sin;
        let mut f = self.shape(self.x.sequence(u));
        if let Some(py) = &self.y {
            let v = -x * self.sin + y * self.cos;
            f *= self.shape(py.sequence(v));
        }
        f
    }
}

/// Repeating sequence of full sine periods.
pub fn period_sequence(periods: &[f64], x: f64) -> f64 {
    Profile::new(periods).sequence(x)
}

/// `max(v, τ)` mapped affinely from `[τ, 1]` back onto `[-1, 1]`.
pub fn clip_rescale(v: f64, tau: f64) -> f64 {
    let tau = tau.clamp(-1.0, 1.0 - 1e-9);
    let v = v.max(tau);
    2.0 * (v - tau) / (1.0 - tau) - 1.0
}

/// Logistic of growth rate `λ`, rescaled so that `[-1, 1]` maps onto `[0, 1]`.
pub fn sigmoid(v: f64, lambda: f64) -> f64 {
    let lo = logistic(-lambda);
    let hi = logistic(lambda);
    ((logistic(lambda * v) - lo) / (hi - lo)).clamp(0.0, 1.0)
}

/// Evaluates the field on pixel coordinates `(x, y)`, displaced by `disp`
/// when given.
pub fn periodic_field_with(pp: &PeriodicParams, width: usize, height: usize, disp: Option<&Displacement>) -> Field {
    let ev = PeriodicEvaluator::new(pp);
    Field::from_fn(width, height, |x, y| {
        let (mut px, mut py) = (x as f64, y as f64);
        if let Some(d) = disp {
            px += d.dx.get(x, y) as f64;
            py += d.dy.get(x, y) as f64;
        }
        ev.eval(px, py) as f32
    })
}

/// The interpolation field of `pp` on a `width`×`height` grid, values in
/// `[0, 1]`. The warp (if any) is drawn from its own seed.
pub fn periodic_field(pp: &PeriodicParams, width: usize, height: usize) -> Field {
    match &pp.warp {
        Some(wp) => {
            let mut rng = rng_from_seed(wp.seed);
            let disp = warp_field(width, height, wp, &mut rng);
            periodic_field_with(pp, width, height, Some(&disp))
        }
        None => periodic_field_with(pp, width, height, None),
    }
}

/// Per-pixel CIELAB interpolation `S c1 + (1 - S) c2`.
pub fn interpolate_colors(field: &Field, c1: LabColor, c2: LabColor) -> RasterImage {
    let (w, h) = (field.width(), field.height());
    let mut img = RasterImage::new(w, h, 3, ColorSpace::Lab);
    let c1 = c1.to_array();
    let c2 = c2.to_array();
    for c in 0..3 {
        let plane = img.plane_mut(c);
        for (o, &s) in plane.iter_mut().zip(field.data()) {
            *o = s * c1[c] + (1.0 - s) * c2[c];
        }
    }
    img
}

pub fn render_periodic(pp: &PeriodicParams, c1: LabColor, c2: LabColor, width: usize, height: usize) -> RasterImage {
    interpolate_colors(&periodic_field(pp, width, height), c1, c2)
}
