//! Generator configuration and ablation presets.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::downscale::DOWNSCALE_SIGMA;
use super::stack::{StackParams, MAX_LEAVES};
use crate::color::{PowerLawParams, DEFAULT_POOL_SIZE};
use crate::error::{Error, Result};
use crate::geometry::{ShapeMix, ShapeParams};
use crate::textures::TextureParams;

/// Feature switches for ablations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct Toggles {
    /// Polygons and rectangles besides disks.
    pub shapes: bool,
    pub periodic_textures: bool,
    pub micro_textures: bool,
    /// When off, every leaf has a constant color.
    pub textures: bool,
    pub depth: bool,
    pub perspective: bool,
}

impl Default for Toggles {
    fn default() -> Self {
        Self {
            shapes: true,
            periodic_textures: true,
            micro_textures: true,
            textures: true,
            depth: true,
            perspective: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Preset {
    Vl,
    NoDepth,
    DisksOnly,
    NoMicro,
    NoPeriodic,
    NoTextures,
    NoTexNoDepth,
    DeadLeaves,
}

impl Preset {
    pub const ALL: [Preset; 8] = [
        Preset::Vl,
        Preset::NoDepth,
        Preset::DisksOnly,
        Preset::NoMicro,
        Preset::NoPeriodic,
        Preset::NoTextures,
        Preset::NoTexNoDepth,
        Preset::DeadLeaves,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Vl => "vl",
            Preset::NoDepth => "no-depth",
            Preset::DisksOnly => "disks-only",
            Preset::NoMicro => "no-micro",
            Preset::NoPeriodic => "no-periodic",
            Preset::NoTextures => "no-textures",
            Preset::NoTexNoDepth => "no-tex-no-depth",
            Preset::DeadLeaves => "dead-leaves",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Preset::Vl => "all features",
            Preset::NoDepth => "no depth of field, no perspective",
            Preset::DisksOnly => "disks instead of complex shapes",
            Preset::NoMicro => "pseudo-periodic textures only",
            Preset::NoPeriodic => "micro-textures only",
            Preset::NoTextures => "constant-color leaves",
            Preset::NoTexNoDepth => "constant-color leaves, no depth of field",
            Preset::DeadLeaves => "classic dead leaves: constant-color disks, no depth",
        }
    }

    pub fn toggles(self) -> Toggles {
        let all = Toggles::default();
        match self {
            Preset::Vl => all,
            Preset::NoDepth => Toggles {
                depth: false,
                perspective: false,
                ..all
            },
            Preset::DisksOnly => Toggles { shapes: false, ..all },
            Preset::NoMicro => Toggles {
                micro_textures: false,
                ..all
            },
            Preset::NoPeriodic => Toggles {
                periodic_textures: false,
                ..all
            },
            Preset::NoTextures => Toggles { textures: false, ..all },
            Preset::NoTexNoDepth => Toggles {
                textures: false,
                depth: false,
                perspective: false,
                ..all
            },
            Preset::DeadLeaves => Toggles {
                shapes: false,
                textures: false,
                depth: false,
                perspective: false,
                ..all
            },
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Preset::ALL.iter().map(|p| p.name()).collect();
                Error::Config(format!("unknown preset {s:?} (known: {})", names.join(", ")))
            })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VlConfig {
    /// Side of the square canvas before downscaling.
    pub canvas: usize,
    /// Coverage targets of the back, middle and front planes.
    pub coverage: [f64; 3],
    pub downscale: usize,
    pub downscale_sigma: f64,
    /// Upper end of the depth-of-field blur std.
    pub sigma_max: f64,
    /// Exponent of the blur-std density `∝ σ^e` on `[0, sigma_max]`.
    pub sigma_exponent: f64,
    pub max_leaves: usize,
    pub color_pool_size: usize,
    /// Folder of natural images used as color sources.
    pub colors: Option<PathBuf>,
    pub radius: PowerLawParams,
    pub shape: ShapeParams,
    pub texture: TextureParams,
    pub toggles: Toggles,
}

impl Default for VlConfig {
    fn default() -> Self {
        Self {
            canvas: 1024,
            coverage: [1.0, 0.5, 0.25],
            downscale: 2,
            downscale_sigma: DOWNSCALE_SIGMA,
            sigma_max: 10.0,
            sigma_exponent: 0.5,
            max_leaves: MAX_LEAVES,
            color_pool_size: DEFAULT_POOL_SIZE,
            colors: None,
            radius: PowerLawParams::default(),
            shape: ShapeParams::default(),
            texture: TextureParams::default(),
            toggles: Toggles::default(),
        }
    }
}

impl VlConfig {
    pub fn for_preset(preset: Preset) -> Self {
        Self {
            toggles: preset.toggles(),
            ..Self::default()
        }
    }

    pub fn with_preset(mut self, preset: Preset) -> Self {
        self.toggles = preset.toggles();
        self
    }

    pub fn output_size(&self) -> usize {
        self.canvas / self.downscale.max(1)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.canvas == 0 {
            return bad("canvas must be positive".into());
        }
        if self.downscale == 0 || !self.canvas.is_multiple_of(self.downscale) {
            return bad(format!("downscale {} must divide canvas {}", self.downscale, self.canvas));
        }
        if !(self.downscale_sigma >= 0.0) {
            return bad(format!("downscale_sigma {} must be non-negative", self.downscale_sigma));
        }
        if self.coverage.iter().any(|p| !(0.0..=1.0).contains(p)) {
            return bad(format!("coverage {:?} outside [0, 1]", self.coverage));
        }
        if self.coverage[0] < 1.0 {
            return bad("the back plane must cover the whole canvas".into());
        }
        if !(self.sigma_max >= 0.0 && self.sigma_max.is_finite()) {
            return bad(format!("sigma_max {} invalid", self.sigma_max));
        }
        if !(self.sigma_exponent > -1.0) {
            return bad(format!("sigma_exponent {} must exceed -1", self.sigma_exponent));
        }
        if self.max_leaves == 0 || self.color_pool_size == 0 {
            return bad("max_leaves and color_pool_size must be positive".into());
        }
        self.radius.validate().map_err(|e| Error::Config(e.to_string()))?;
        self.shape.validate()?;
        self.texture.validate()
    }

    /// Shape parameters with the toggles applied.
    pub fn effective_shape(&self) -> ShapeParams {
        let mut sp = self.shape.clone();
        if !self.toggles.shapes {
            sp.mix = ShapeMix::disks_only();
        }
        sp
    }

    /// Texture parameters with the toggles applied.
    pub fn effective_texture(&self) -> TextureParams {
        let t = &self.toggles;
        let mut tp = self.texture.clone();
        if !t.textures {
            tp.mix.periodic = 0.0;
            tp.mix.micro = 0.0;
        }
        if !t.periodic_textures {
            tp.mix.periodic = 0.0;
        }
        if !t.micro_textures {
            tp.mix.micro = 0.0;
        }
        // The two-scale blend needs both generators.
        if !(t.textures && t.periodic_textures && t.micro_textures) {
            tp.mix.two_scale = 0.0;
        }
        if !t.perspective {
            tp.p_perspective = 0.0;
        }
        tp
    }

    pub fn stack_params(&self) -> StackParams {
        StackParams {
            radius: self.radius,
            shape: self.effective_shape(),
            texture: self.effective_texture(),
            max_leaves: self.max_leaves,
        }
    }

    pub fn from_toml_str(s: &str) -> Result<Self> {
        let cfg: VlConfig = toml::from_str(s).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let cfg: VlConfig = serde_json::from_str(s).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads a TOML file, or JSON when the extension is `.json`. Relative
    /// color folders resolve against the file's directory.
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let is_json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
        let mut cfg = if is_json {
            Self::from_json_str(&text)?
        } else {
            Self::from_toml_str(&text)?
        };
        if let (Some(colors), Some(dir)) = (cfg.colors.as_ref(), path.parent()) {
            if colors.is_relative() {
                cfg.colors = Some(dir.join(colors));
            }
        }
        Ok(cfg)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string_pretty(self).map_err(|e| Error::Config(e.to_string()))
    }

    /// Compact JSON with fields in declaration order; stable for hashing.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes to JSON")
    }
}
