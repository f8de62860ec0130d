//! Random texture selection.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::blend::two_scale_texture;
use super::homography::{is_convex_quad, perspective_warp, HomographyCorners};
use super::micro::{micro_texture_rect, MicroParams};
use super::periodic::{periodic_field, render_periodic, PeriodicParams};
use super::warp::WarpParams;
use crate::color::{ColorSource, LabColor};
use crate::error::{Error, Result};
use crate::image::{ColorSpace, RasterImage};
use crate::rng::{rng_from_seed, uniform};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TextureKind {
    Flat,
    Periodic,
    Micro,
    TwoScale,
}

/// Branch weights. All-zero weights give flat-colored leaves.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TextureMix {
    pub periodic: f64,
    pub micro: f64,
    pub two_scale: f64,
}

impl Default for TextureMix {
    fn default() -> Self {
        Self {
            periodic: 1.0 / 6.0,
            micro: 2.0 / 3.0,
            two_scale: 1.0 / 6.0,
        }
    }
}

impl TextureMix {
    pub fn flat() -> Self {
        Self {
            periodic: 0.0,
            micro: 0.0,
            two_scale: 0.0,
        }
    }

    pub fn total(&self) -> f64 {
        self.periodic + self.micro + self.two_scale
    }

    pub fn pick(&self, u: f64) -> TextureKind {
        let total = self.total();
        if total <= 0.0 {
            return TextureKind::Flat;
        }
        let u = u * total;
        if u < self.periodic {
            TextureKind::Periodic
        } else if u < self.periodic + self.micro {
            TextureKind::Micro
        } else {
            TextureKind::TwoScale
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TextureParams {
    pub mix: TextureMix,
    /// Inclusive range for the number of periods in a sequence.
    pub n_periods: [usize; 2],
    pub period: [f64; 2],
    pub lambda: [f64; 2],
    pub theta: [f64; 2],
    pub tau: [f64; 2],
    /// Probability that a periodic field varies along both axes.
    pub p_two_dims: f64,
    pub micro_gamma: [f64; 2],
    pub p_warp: f64,
    /// Blur std of the turbulence noise, in pixels.
    pub warp_sigma: [f64; 2],
    /// RMS displacement of the turbulence, in pixels.
    pub warp_amplitude: [f64; 2],
    pub p_perspective: f64,
    /// Corner jitter as a fraction of the texture size.
    pub perspective_jitter: f64,
}

impl Default for TextureParams {
    fn default() -> Self {
        Self {
            mix: TextureMix::default(),
            n_periods: [1, 4],
            period: [5.0, 100.0],
            lambda: [1.0, 10.0],
            theta: [0.0, std::f64::consts::FRAC_PI_4],
            tau: [-1.0, 1.0],
            p_two_dims: 0.5,
            micro_gamma: [0.5, 2.5],
            p_warp: 0.5,
            warp_sigma: [4.0, 16.0],
            warp_amplitude: [2.0, 10.0],
            p_perspective: 0.5,
            perspective_jitter: 0.25,
        }
    }
}

impl TextureParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        let m = &self.mix;
        if m.periodic < 0.0 || m.micro < 0.0 || m.two_scale < 0.0 {
            return bad("texture mix weights must be non-negative".into());
        }
        if self.n_periods[0] < 1 || self.n_periods[0] > self.n_periods[1] {
            return bad(format!("texture n_periods range {:?} invalid", self.n_periods));
        }
        for (name, r, lo) in [
            ("period", self.period, 1e-3),
            ("lambda", self.lambda, 1e-6),
            ("micro_gamma", self.micro_gamma, 0.0),
            ("warp_sigma", self.warp_sigma, 0.0),
            ("warp_amplitude", self.warp_amplitude, 0.0),
        ] {
            if !(r[0] >= lo && r[0] <= r[1] && r[1].is_finite()) {
                return bad(format!("texture {name} range {r:?} invalid"));
            }
        }
        if !(self.tau[0] >= -1.0 && self.tau[0] <= self.tau[1] && self.tau[1] <= 1.0) {
            return bad(format!("texture tau range {:?} outside [-1, 1]", self.tau));
        }
        if self.theta[0] > self.theta[1] {
            return bad(format!("texture theta range {:?} invalid", self.theta));
        }
        for (name, p) in [
            ("p_two_dims", self.p_two_dims),
            ("p_warp", self.p_warp),
            ("p_perspective", self.p_perspective),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return bad(format!("texture {name} = {p} outside [0, 1]"));
            }
        }
        if !(0.0..0.5).contains(&self.perspective_jitter) {
            return bad(format!("perspective_jitter {} outside [0, 0.5)", self.perspective_jitter));
        }
        Ok(())
    }
}

/// Everything needed to render one texture map given its color source.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TextureSpec {
    Flat {
        color: LabColor,
    },
    Periodic {
        params: PeriodicParams,
        c1: LabColor,
        c2: LabColor,
        perspective: Option<HomographyCorners>,
    },
    Micro {
        params: MicroParams,
        seed: u64,
    },
    TwoScale {
        t1: MicroParams,
        t2: MicroParams,
        seeds: [u64; 2],
        mask: PeriodicParams,
    },
}

impl TextureSpec {
    pub fn kind(&self) -> TextureKind {
        match self {
            TextureSpec::Flat { .. } => TextureKind::Flat,
            TextureSpec::Periodic { .. } => TextureKind::Periodic,
            TextureSpec::Micro { .. } => TextureKind::Micro,
            TextureSpec::TwoScale { .. } => TextureKind::TwoScale,
        }
    }
}

fn sample_sequence<R: Rng + ?Sized>(tp: &TextureParams, rng: &mut R) -> Vec<f64> {
    let k = rng.random_range(tp.n_periods[0]..=tp.n_periods[1]);
    (0..k).map(|_| uniform(rng, tp.period)).collect()
}

pub fn sample_periodic_params<R: Rng + ?Sized>(tp: &TextureParams, rng: &mut R) -> PeriodicParams {
    let periods = sample_sequence(tp, rng);
    let periods_y = sample_sequence(tp, rng);
    let lambda = uniform(rng, tp.lambda);
    let theta = uniform(rng, tp.theta);
    let tau = uniform(rng, tp.tau);
    let dims = if rng.random_bool(tp.p_two_dims) { 2 } else { 1 };
    let warp = rng.random_bool(tp.p_warp).then(|| {
        let d = uniform(rng, tp.warp_amplitude);
        let s = uniform(rng, tp.warp_sigma);
        WarpParams::with_rms(d, s, rng.random())
    });
    PeriodicParams {
        periods,
        periods_y,
        lambda,
        theta,
        tau,
        dims,
        warp,
    }
}

const MAX_CORNER_DRAWS: usize = 100;

/// Jitters the image corners by up to `jitter · size` per axis, redrawing
/// until the quadrilateral is convex.
pub fn sample_perspective<R: Rng + ?Sized>(
    width: usize,
    height: usize,
    jitter: f64,
    rng: &mut R,
) -> HomographyCorners {
    let src = HomographyCorners::image_corners(width, height);
    let (jx, jy) = (jitter * width as f64, jitter * height as f64);
    for _ in 0..MAX_CORNER_DRAWS {
        let dst = src.map(|p| {
            let dx = uniform(rng, [-jx, jx]);
            let dy = uniform(rng, [-jy, jy]);
            [p[0] + dx, p[1] + dy]
        });
        if is_convex_quad(&dst) {
            return HomographyCorners { src, dst };
        }
    }
    HomographyCorners { src, dst: src }
}

fn sample_micro<R: Rng + ?Sized>(tp: &TextureParams, rng: &mut R) -> MicroParams {
    MicroParams {
        gamma: uniform(rng, tp.micro_gamma),
    }
}

pub fn sample_texture_spec<R: Rng + ?Sized>(
    tp: &TextureParams,
    src: &ColorSource,
    width: usize,
    height: usize,
    rng: &mut R,
) -> TextureSpec {
    let kind = tp.mix.pick(rng.random());
    match kind {
        TextureKind::Flat => TextureSpec::Flat {
            color: src.draw_color(rng),
        },
        TextureKind::Periodic => {
            let params = sample_periodic_params(tp, rng);
            let c1 = src.draw_color(rng);
            let c2 = src.draw_color(rng);
            let perspective = (width > 1 && height > 1 && rng.random_bool(tp.p_perspective))
                .then(|| sample_perspective(width, height, tp.perspective_jitter, rng));
            TextureSpec::Periodic {
                params,
                c1,
                c2,
                perspective,
            }
        }
        TextureKind::Micro => TextureSpec::Micro {
            params: sample_micro(tp, rng),
            seed: rng.random(),
        },
        TextureKind::TwoScale => TextureSpec::TwoScale {
            t1: sample_micro(tp, rng),
            t2: sample_micro(tp, rng),
            seeds: [rng.random(), rng.random()],
            mask: sample_periodic_params(tp, rng),
        },
    }
}

fn micro_cropped(mp: &MicroParams, src: &ColorSource, seed: u64, width: usize, height: usize) -> Result<RasterImage> {
    let (nw, nh) = (width.max(1).next_power_of_two(), height.max(1).next_power_of_two());
    let tex = micro_texture_rect(mp, src, nw, nh, &mut rng_from_seed(seed))?;
    Ok(if nw == width && nh == height {
        tex
    } else {
        tex.crop(0, 0, width, height)
    })
}

/// Renders a `width`×`height` Lab texture map.
pub fn render_texture(spec: &TextureSpec, src: &ColorSource, width: usize, height: usize) -> Result<RasterImage> {
    match spec {
        TextureSpec::Flat { color } => Ok(RasterImage::constant(width, height, ColorSpace::Lab, &color.to_array())),
        TextureSpec::Periodic {
            params,
            c1,
            c2,
            perspective,
        } => {
            let img = render_periodic(params, *c1, *c2, width, height);
            match perspective {
                Some(corners) => perspective_warp(&img, corners),
                None => Ok(img),
            }
        }
        TextureSpec::Micro { params, seed } => micro_cropped(params, src, *seed, width, height),
        TextureSpec::TwoScale { t1, t2, seeds, mask } => {
            let a = micro_cropped(t1, src, seeds[0], width, height)?;
            let b = micro_cropped(t2, src, seeds[1], width, height)?;
            two_scale_texture(&a, &b, &periodic_field(mask, width, height))
        }
    }
}

/// Draws and renders one texture map.
pub fn sample_texture<R: Rng + ?Sized>(
    tp: &TextureParams,
    src: &ColorSource,
    width: usize,
    height: usize,
    rng: &mut R,
) -> Result<(TextureSpec, RasterImage)> {
    let spec = sample_texture_spec(tp, src, width, height, rng);
    let img = render_texture(&spec, src, width, height)?;
    Ok((spec, img))
}
