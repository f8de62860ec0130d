//! Radially averaged power spectra and log-log slope fits.

use rustfft::num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::gray::Gray;
use crate::error::{Error, Result};
use crate::fft::fft2d;

pub const FIT_LO: f64 = 0.01;
pub const FIT_HI: f64 = 0.35;
pub const MIN_FIT_BINS: usize = 10;

/// Mean `|FFT|²` over integer-radius annuli. Annulus `r` collects the DFT
/// bins whose signed-frequency radius rounds to `r`, and sits at frequency
/// `r / N` cycles/pixel. Annuli extend to the corner of the spectrum.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadialSpectrum {
    pub size: usize,
    pub images: usize,
    pub freq: Vec<f64>,
    pub power: Vec<f64>,
    pub counts: Vec<u64>,
}

/// Annulus index of every DFT bin of an `n`×`n` grid.
fn annulus_map(n: usize) -> (Vec<usize>, usize) {
    let signed = |k: usize| if k <= n / 2 { k as f64 } else { k as f64 - n as f64 };
    let mut idx = Vec::with_capacity(n * n);
    let mut max = 0;
    for ky in 0..n {
        for kx in 0..n {
            let r = signed(kx).hypot(signed(ky)).round() as usize;
            max = max.max(r);
            idx.push(r);
        }
    }
    (idx, max + 1)
}

/// `|FFT|²` of the mean-removed image, unnormalized.
pub fn power_spectrum_2d(img: &Gray) -> Vec<f64> {
    let (w, h) = (img.width(), img.height());
    let mean = img.data().iter().sum::<f64>() / img.data().len().max(1) as f64;
    let mut buf: Vec<Complex<f64>> = img.data().iter().map(|&v| Complex::new(v - mean, 0.0)).collect();
    fft2d(&mut buf, w, h, false);
    buf.iter().map(|c| c.norm_sqr()).collect()
}

/// Average over `images` of each image's annulus means. All images must be
/// square and share one size.
pub fn radial_spectrum(images: &[Gray]) -> Result<RadialSpectrum> {
    let first = images
        .first()
        .ok_or_else(|| Error::Empty("no images for the power spectrum".into()))?;
    let n = first.width();
    for img in images {
        if img.width() != img.height() {
            return Err(Error::DimensionMismatch(format!(
                "power spectrum needs square images, got {}x{}",
                img.width(),
                img.height()
            )));
        }
        if img.width() != n {
            return Err(Error::DimensionMismatch(format!(
                "power spectrum images differ in size ({} vs {n})",
                img.width()
            )));
        }
    }
    let (idx, bins) = annulus_map(n);
    let mut counts = vec![0u64; bins];
    for &r in &idx {
        counts[r] += 1;
    }
    let mut power = vec![0.0; bins];
    for img in images {
        let mut sums = vec![0.0; bins];
        for (&r, p) in idx.iter().zip(power_spectrum_2d(img)) {
            sums[r] += p;
        }
        for r in 0..bins {
            power[r] += sums[r] / counts[r] as f64;
        }
    }
    for p in &mut power {
        *p /= images.len() as f64;
    }
    Ok(RadialSpectrum {
        size: n,
        images: images.len(),
        freq: (0..bins).map(|r| r as f64 / n as f64).collect(),
        power,
        counts,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlopeFit {
    /// Decay exponent: minus the fitted log-log slope.
    pub gamma: f64,
    pub intercept: f64,
    pub r2: f64,
    pub freq_range: [f64; 2],
    pub bins: usize,
}

/// Ordinary least squares of `ln P` against `ln f` over annuli with
/// `f_lo <= f <= f_hi` and positive power.
pub fn fit_slope(rs: &RadialSpectrum, f_lo: f64, f_hi: f64) -> Result<SlopeFit> {
    let pts: Vec<(f64, f64)> = rs
        .freq
        .iter()
        .zip(&rs.power)
        .filter(|&(&f, &p)| f >= f_lo && f <= f_hi && f > 0.0 && p > 0.0)
        .map(|(&f, &p)| (f.ln(), p.ln()))
        .collect();
    if pts.len() < MIN_FIT_BINS {
        return Err(Error::Degenerate(format!(
            "{} spectrum bins in [{f_lo}, {f_hi}], need at least {MIN_FIT_BINS}",
            pts.len()
        )));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = pts.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    let r2 = if syy > 0.0 { (1.0 - sse / syy).clamp(0.0, 1.0) } else { 1.0 };
    Ok(SlopeFit {
        gamma: -slope,
        intercept,
        r2,
        freq_range: [f_lo, f_hi],
        bins: pts.len(),
    })
}

/// Fit over the default band.
pub fn fit_slope_default(rs: &RadialSpectrum) -> Result<SlopeFit> {
    fit_slope(rs, FIT_LO, FIT_HI)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;
    use rand::Rng;

    fn noise(n: usize, seed: u64) -> Gray {
        let mut rng = rng_from_seed(seed);
        Gray::from_fn(n, n, |_, _| rng.random::<f64>())
    }

    #[test]
    fn parseval_holds() {
        let img = noise(64, 1);
        let rs = radial_spectrum(std::slice::from_ref(&img)).unwrap();
        let total: f64 = rs.power.iter().zip(&rs.counts).map(|(p, &c)| p * c as f64).sum();
        let mean = img.data().iter().sum::<f64>() / (64.0 * 64.0);
        let energy: f64 = img.data().iter().map(|v| (v - mean).powi(2)).sum();
        assert!((total / (energy * 64.0 * 64.0) - 1.0).abs() < 1e-6);
        assert_eq!(rs.counts.iter().sum::<u64>(), 64 * 64);
    }

    #[test]
    fn rotation_by_90_degrees_is_invisible() {
        let img = noise(48, 2);
        let a = radial_spectrum(std::slice::from_ref(&img)).unwrap();
        let b = radial_spectrum(&[img.rot90()]).unwrap();
        for (x, y) in a.power.iter().zip(&b.power) {
            assert!((x - y).abs() <= 1e-9 * x.abs().max(1e-12), "{x} vs {y}");
        }
    }

    #[test]
    fn sinusoid_peaks_at_its_frequency() {
        let (n, t) = (128, 16.0);
        let img = Gray::from_fn(n, n, |x, _| (std::f64::consts::TAU * x as f64 / t).sin());
        let rs = radial_spectrum(&[img]).unwrap();
        let peak = (1..rs.power.len()).max_by(|&a, &b| rs.power[a].total_cmp(&rs.power[b])).unwrap();
        assert!((rs.freq[peak] - 1.0 / t).abs() < 1e-12);
    }

    #[test]
    fn white_noise_is_flat() {
        let imgs: Vec<Gray> = (0..8).map(|s| noise(128, 10 + s)).collect();
        let fit = fit_slope_default(&radial_spectrum(&imgs).unwrap()).unwrap();
        assert!(fit.gamma.abs() < 0.05, "gamma {}", fit.gamma);
    }

    #[test]
    fn exact_power_law_is_recovered() {
        let freq: Vec<f64> = (0..200).map(|r| r as f64 / 400.0).collect();
        let power = freq.iter().map(|&f| if f > 0.0 { 3.0 * f.powf(-1.5) } else { 0.0 }).collect();
        let rs = RadialSpectrum {
            size: 400,
            images: 1,
            counts: vec![1; 200],
            freq,
            power,
        };
        let fit = fit_slope_default(&rs).unwrap();
        assert!((fit.gamma - 1.5).abs() < 1e-12);
        assert!((fit.r2 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn intensity_scaling_leaves_slope_unchanged() {
        let imgs: Vec<Gray> = (0..2).map(|s| noise(64, 20 + s)).collect();
        let scaled: Vec<Gray> = imgs.iter().map(|g| g.map(|v| 4.0 * v)).collect();
        let a = fit_slope_default(&radial_spectrum(&imgs).unwrap()).unwrap();
        let b = fit_slope_default(&radial_spectrum(&scaled).unwrap()).unwrap();
        assert!((a.gamma - b.gamma).abs() < 1e-12);
        assert!((a.r2 - b.r2).abs() < 1e-12);
    }

    #[test]
    fn input_validation() {
        assert!(radial_spectrum(&[]).is_err());
        assert!(radial_spectrum(&[Gray::from_fn(8, 6, |_, _| 0.0)]).is_err());
        assert!(radial_spectrum(&[noise(8, 0), noise(16, 0)]).is_err());
        let rs = radial_spectrum(&[noise(16, 0)]).unwrap();
        assert!(fit_slope_default(&rs).is_err());
    }
}
