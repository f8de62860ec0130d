//! Grayscale conversion for the statistics: CIE luminance `Y` of sRGB
//! pixels, in `[0, 1]`.

use std::path::Path;
use std::sync::OnceLock;

use crate::color::{decode_rgb, srgb8_luminance};
use crate::error::{Error, Result};
use crate::export::Rgb8Image;

/// Row-major double-precision grayscale image.
#[derive(Clone, Debug, PartialEq)]
pub struct Gray {
    width: usize,
    height: usize,
    data: Vec<f64>,
}

impl Gray {
    pub fn new(width: usize, height: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != width * height {
            return Err(Error::DimensionMismatch(format!(
                "{} samples for a {width}x{height} image",
                data.len()
            )));
        }
        Ok(Self { width, height, data })
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        Self { width, height, data }
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.data[y * self.width + x]
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn crop(&self, x0: usize, y0: usize, w: usize, h: usize) -> Gray {
        Gray::from_fn(w, h, |x, y| self.get(x0 + x, y0 + y))
    }

    /// Largest centered square.
    pub fn center_square(&self) -> Gray {
        let n = self.width.min(self.height);
        self.crop((self.width - n) / 2, (self.height - n) / 2, n, n)
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Gray {
        Gray {
            width: self.width,
            height: self.height,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Rotation by 90° (counter-clockwise in image coordinates).
    pub fn rot90(&self) -> Gray {
        Gray::from_fn(self.height, self.width, |x, y| self.get(self.width - 1 - y, x))
    }
}

fn luminance_lut() -> &'static [[f64; 256]; 3] {
    static LUT: OnceLock<[[f64; 256]; 3]> = OnceLock::new();
    LUT.get_or_init(|| {
        let mut lut = [[0.0; 256]; 3];
        for (c, table) in lut.iter_mut().enumerate() {
            for (v, entry) in table.iter_mut().enumerate() {
                let mut rgb = [0u8; 3];
                rgb[c] = v as u8;
                *entry = srgb8_luminance(rgb);
            }
        }
        lut
    })
}

/// Luminance of interleaved 8-bit sRGB pixels.
pub fn gray_from_rgb8(width: usize, height: usize, rgb: &[u8]) -> Result<Gray> {
    if rgb.len() != width * height * 3 {
        return Err(Error::DimensionMismatch(format!(
            "{} bytes for a {width}x{height} RGB image",
            rgb.len()
        )));
    }
    let lut = luminance_lut();
    let data = rgb
        .chunks_exact(3)
        .map(|p| lut[0][p[0] as usize] + lut[1][p[1] as usize] + lut[2][p[2] as usize])
        .collect();
    Gray::new(width, height, data)
}

pub fn gray_from_image(img: &Rgb8Image) -> Gray {
    gray_from_rgb8(img.width, img.height, &img.data).expect("RGB buffer matches its size")
}

pub fn load_gray(path: &Path) -> Result<Gray> {
    let img = decode_rgb(path)?;
    gray_from_rgb8(img.width() as usize, img.height() as usize, img.as_raw())
}
