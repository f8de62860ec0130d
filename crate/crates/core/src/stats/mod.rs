//! Naturalness statistics: gradient-magnitude histograms compared by KL
//! divergence, and radially averaged power spectra with a log-log slope fit.

pub mod gradient;
pub mod gray;
pub mod report;
pub mod spectrum;

pub use gradient::{
    gradient_hist, gradient_hist_full, kl_densities, kl_divergence, GradHistogram, DEFAULT_PATCH, DEFAULT_PATCHES,
    GRAD_BINS, GRAD_MAX, KL_EPSILON,
};
pub use gray::{gray_from_image, gray_from_rgb8, load_gray, Gray};
pub use report::{CorpusStats, StatsReport, StatsSettings};
pub use spectrum::{
    fit_slope, fit_slope_default, power_spectrum_2d, radial_spectrum, RadialSpectrum, SlopeFit, FIT_HI, FIT_LO,
    MIN_FIT_BINS,
};
