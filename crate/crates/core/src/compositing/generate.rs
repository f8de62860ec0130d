//! End-to-end image synthesis.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::config::VlConfig;
use super::dof::{fuse_three_planes, DofParams};
use super::downscale::downscale;
use super::stack::{leaves_stack, SceneLayer};
use crate::color::{ColorLibrary, ColorSource};
use crate::error::{Error, Result};
use crate::export::{write_png, Rgb8Image};
use crate::image::Image64;
use crate::rng::{child_rng, derive_seed};

const STREAM_COLORS: u64 = 0;
const STREAM_DOF: u64 = 1;
const STREAM_LAYERS: u64 = 2;

/// What was drawn for one image.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ImageRecord {
    pub seed: u64,
    pub sigma1: f64,
    pub sigma3: f64,
    pub color_source: String,
    /// Leaves drawn for the back, middle and front planes.
    pub leaves: [usize; 3],
    pub visible_leaves: [usize; 3],
}

#[derive(Clone, Debug)]
pub struct GeneratedImage {
    /// Lab image at the output resolution.
    pub image: Image64,
    pub record: ImageRecord,
}

impl GeneratedImage {
    pub fn to_rgb8(&self) -> Rgb8Image {
        Rgb8Image::from_lab(&self.image)
    }

    pub fn write_png(&self, path: &Path) -> Result<Rgb8Image> {
        let rgb = self.to_rgb8();
        write_png(path, &rgb)?;
        Ok(rgb)
    }
}

/// The three planes before fusion, back to front.
#[derive(Clone, Debug)]
pub struct Planes {
    pub layers: [SceneLayer; 3],
    pub dof: DofParams,
}

/// A validated configuration together with its color library.
#[derive(Debug)]
pub struct Generator {
    cfg: VlConfig,
    library: ColorLibrary,
}

impl Generator {
    /// Opens the color folder named in the configuration.
    pub fn new(cfg: VlConfig) -> Result<Self> {
        let dir = cfg
            .colors
            .clone()
            .ok_or_else(|| Error::Config("no color source folder configured".into()))?;
        let library = ColorLibrary::open(&dir)?;
        Self::with_library(cfg, library)
    }

    pub fn with_library(cfg: VlConfig, library: ColorLibrary) -> Result<Self> {
        cfg.validate()?;
        let library = library.with_pool_size(cfg.color_pool_size);
        Ok(Self { cfg, library })
    }

    pub fn config(&self) -> &VlConfig {
        &self.cfg
    }

    pub fn color_source(&self, seed: u64) -> Result<ColorSource> {
        self.library.sample(&mut child_rng(seed, STREAM_COLORS))
    }

    /// Draws the three leaf planes and blur stds for `seed`, from `src`.
    pub fn planes(&self, seed: u64, src: &ColorSource) -> Result<Planes> {
        let cfg = &self.cfg;
        let sp = cfg.stack_params();
        let layer = |k: usize| {
            leaves_stack(
                cfg.coverage[k],
                cfg.canvas,
                src,
                &sp,
                derive_seed(seed, STREAM_LAYERS + k as u64),
            )
        };
        let layers = [layer(0)?, layer(1)?, layer(2)?];
        let dof = if cfg.toggles.depth {
            DofParams::sample(cfg.sigma_max, cfg.sigma_exponent, &mut child_rng(seed, STREAM_DOF))
        } else {
            DofParams::in_focus()
        };
        Ok(Planes { layers, dof })
    }

    /// Fuses the planes and downscales to the output size.
    pub fn finish(&self, planes: &Planes) -> Result<Image64> {
        let [back, mid, front] = &planes.layers;
        let fused = fuse_three_planes(
            &Image64::from_raster(&back.stack),
            &Image64::from_raster(&mid.stack),
            &mid.mask,
            &Image64::from_raster(&front.stack),
            &front.mask,
            &planes.dof,
        )?;
        downscale(&fused, self.cfg.downscale, self.cfg.downscale_sigma)
    }

    /// Fully determined by the configuration, the color folder and `seed`.
    pub fn generate(&self, seed: u64) -> Result<GeneratedImage> {
        let src = self.color_source(seed)?;
        let planes = self.planes(seed, &src)?;
        let image = self.finish(&planes)?;
        let record = ImageRecord {
            seed,
            sigma1: planes.dof.sigma1,
            sigma3: planes.dof.sigma3,
            color_source: src.source_id().to_string(),
            leaves: planes.layers.each_ref().map(|l| l.leaves_drawn),
            visible_leaves: planes.layers.each_ref().map(|l| l.visible.len()),
        };
        Ok(GeneratedImage { image, record })
    }
}

pub fn generate_vl(cfg: &VlConfig, seed: u64) -> Result<GeneratedImage> {
    Generator::new(cfg.clone())?.generate(seed)
}
