//! Corpus-level statistics and the JSON/CSV report.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::gradient::{gradient_hist, kl_divergence, GradHistogram, DEFAULT_PATCH, DEFAULT_PATCHES, GRAD_BINS, GRAD_MAX, KL_EPSILON};
use super::gray::Gray;
use super::spectrum::{fit_slope, radial_spectrum, RadialSpectrum, SlopeFit, FIT_HI, FIT_LO};
use crate::error::{Error, Result};
use crate::rng::{derive_seed, rng_from_seed};

/// Every knob that affects the numbers, recorded alongside them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StatsSettings {
    /// Channel reduction; always CIE `Y` of the sRGB pixels.
    pub gray: String,
    pub grad_bins: usize,
    pub grad_range: f64,
    pub kl_epsilon: f64,
    pub patch_size: usize,
    pub n_patches: usize,
    /// Input patches use `derive_seed(seed, 0)`, reference patches
    /// `derive_seed(seed, 1)`.
    pub seed: u64,
    pub fit_lo: f64,
    pub fit_hi: f64,
}

impl Default for StatsSettings {
    fn default() -> Self {
        Self {
            gray: "cie-y".into(),
            grad_bins: GRAD_BINS,
            grad_range: GRAD_MAX,
            kl_epsilon: KL_EPSILON,
            patch_size: DEFAULT_PATCH,
            n_patches: DEFAULT_PATCHES,
            seed: 0,
            fit_lo: FIT_LO,
            fit_hi: FIT_HI,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorpusStats {
    pub images: usize,
    pub gradient: GradHistogram,
    /// Spectra use the centered square of side `spectrum.size` of every
    /// image, the smallest side in the corpus.
    pub spectrum: RadialSpectrum,
    pub slope: SlopeFit,
}

impl CorpusStats {
    /// Patches are drawn from `rng_from_seed(seed)`.
    pub fn compute(images: &[Gray], settings: &StatsSettings, seed: u64) -> Result<Self> {
        if images.is_empty() {
            return Err(Error::Empty("no images in corpus".into()));
        }
        let mut rng = rng_from_seed(seed);
        let gradient = gradient_hist(images, settings.patch_size, settings.n_patches, &mut rng)?;
        let side = images.iter().map(|g| g.width().min(g.height())).min().unwrap_or(0);
        let squares: Vec<Gray> = images
            .iter()
            .map(|g| {
                let (w, h) = (g.width(), g.height());
                g.crop((w - side) / 2, (h - side) / 2, side, side)
            })
            .collect();
        let spectrum = radial_spectrum(&squares)?;
        let slope = fit_slope(&spectrum, settings.fit_lo, settings.fit_hi)?;
        Ok(Self {
            images: images.len(),
            gradient,
            spectrum,
            slope,
        })
    }

    /// `freq,power` rows of the radial spectrum.
    pub fn spectrum_csv(&self) -> String {
        let mut s = String::from("freq,power,count\n");
        for ((f, p), c) in self.spectrum.freq.iter().zip(&self.spectrum.power).zip(&self.spectrum.counts) {
            let _ = writeln!(s, "{f},{p},{c}");
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StatsReport {
    pub settings: StatsSettings,
    pub input: CorpusStats,
    pub reference: Option<CorpusStats>,
    /// `KL(input ‖ reference)` of the gradient histograms, in nats.
    pub kl: Option<f64>,
}

impl StatsReport {
    pub fn compute(input: &[Gray], reference: Option<&[Gray]>, settings: StatsSettings) -> Result<Self> {
        let input_stats = CorpusStats::compute(input, &settings, derive_seed(settings.seed, 0))?;
        let reference = reference
            .map(|r| CorpusStats::compute(r, &settings, derive_seed(settings.seed, 1)))
            .transpose()?;
        let kl = reference
            .as_ref()
            .map(|r| kl_divergence(&input_stats.gradient, &r.gradient))
            .transpose()?;
        Ok(Self {
            settings,
            input: input_stats,
            reference,
            kl,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
