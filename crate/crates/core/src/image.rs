//! Pixel carriers shared by every stage of the pipeline.
//!
//! [`RasterImage`] stores channels planar (`data[c * w * h + y * w + x]`) so
//! that per-channel filtering works on contiguous slices. [`Field`] is a
//! single scalar plane, used for interpolation fields, blurred masks and
//! grayscale statistics.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ColorSpace {
    LinearRgb,
    Lab,
}

/// A scalar `f32` plane in row-major order.
#[derive(Clone, Debug, PartialEq)]
pub struct Field {
    width: usize,
    height: usize,
    data: Vec<f32>,
}

impl Field {
    pub fn new(width: usize, height: usize) -> Self {
        Self::filled(width, height, 0.0)
    }

    pub fn filled(width: usize, height: usize, value: f32) -> Self {
        Self {
            width,
            height,
            data: vec![value; width * height],
        }
    }

    pub fn from_vec(width: usize, height: usize, data: Vec<f32>) -> Result<Self> {
        if data.len() != width * height {
            return Err(Error::DimensionMismatch(format!(
                "field {}x{} needs {} samples, got {}",
                width,
                height,
                width * height,
                data.len()
            )));
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> f32) -> Self {
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        Self {
            width,
            height,
            data,
        }
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
    pub fn get(&self, x: usize, y: usize) -> f32 {
        self.data[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, v: f32) {
        self.data[y * self.width + x] = v;
    }

    pub fn data(&self) -> &[f32] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f32] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<f32> {
        self.data
    }

    pub fn mean(&self) -> f64 {
        if self.data.is_empty() {
            return 0.0;
        }
        self.data.iter().map(|&v| v as f64).sum::<f64>() / self.data.len() as f64
    }

    pub fn std(&self) -> f64 {
        if self.data.is_empty() {
            return 0.0;
        }
        let m = self.mean();
        let var = self
            .data
            .iter()
            .map(|&v| (v as f64 - m).powi(2))
            .sum::<f64>()
            / self.data.len() as f64;
        var.sqrt()
    }

    pub fn map(&self, f: impl Fn(f32) -> f32) -> Field {
        Field {
            width: self.width,
            height: self.height,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Copies the `w`×`h` window whose top-left corner is `(x0, y0)`.
    pub fn crop(&self, x0: usize, y0: usize, w: usize, h: usize) -> Field {
        assert!(x0 + w <= self.width && y0 + h <= self.height, "crop out of bounds");
        let mut data = Vec::with_capacity(w * h);
        for y in y0..y0 + h {
            let row = y * self.width;
            data.extend_from_slice(&self.data[row + x0..row + x0 + w]);
        }
        Field {
            width: w,
            height: h,
            data,
        }
    }
}

/// An H×W×C floating-point image tagged with its color space.
#[derive(Clone, Debug, PartialEq)]
pub struct RasterImage {
    width: usize,
    height: usize,
    channels: usize,
    space: ColorSpace,
    data: Vec<f32>,
}

impl RasterImage {
    pub fn new(width: usize, height: usize, channels: usize, space: ColorSpace) -> Self {
        Self {
            width,
            height,
            channels,
            space,
            data: vec![0.0; width * height * channels],
        }
    }

    /// An image where every pixel holds `pixel`.
    pub fn constant(width: usize, height: usize, space: ColorSpace, pixel: &[f32]) -> Self {
        let plane = width * height;
        let mut data = Vec::with_capacity(plane * pixel.len());
        for &v in pixel {
            data.extend(std::iter::repeat_n(v, plane));
        }
        Self {
            width,
            height,
            channels: pixel.len(),
            space,
            data,
        }
    }

    pub fn from_planes(space: ColorSpace, planes: Vec<Field>) -> Result<Self> {
        let first = planes
            .first()
            .ok_or_else(|| Error::Empty("no planes".into()))?;
        let (w, h) = (first.width(), first.height());
        if planes.iter().any(|p| p.width() != w || p.height() != h) {
            return Err(Error::DimensionMismatch(
                "planes have differing sizes".into(),
            ));
        }
        let channels = planes.len();
        let mut data = Vec::with_capacity(w * h * channels);
        for p in planes {
            data.extend_from_slice(p.data());
        }
        Ok(Self {
            width: w,
            height: h,
            channels,
            space,
            data,
        })
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
    pub fn channels(&self) -> usize {
        self.channels
    }

    #[inline]
    pub fn space(&self) -> ColorSpace {
        self.space
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize, c: usize) -> f32 {
        self.data[(c * self.height + y) * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, c: usize, v: f32) {
        self.data[(c * self.height + y) * self.width + x] = v;
    }

    pub fn pixel(&self, x: usize, y: usize) -> Vec<f32> {
        (0..self.channels).map(|c| self.get(x, y, c)).collect()
    }

    pub fn plane(&self, c: usize) -> &[f32] {
        let n = self.width * self.height;
        &self.data[c * n..(c + 1) * n]
    }

    pub fn plane_mut(&mut self, c: usize) -> &mut [f32] {
        let n = self.width * self.height;
        &mut self.data[c * n..(c + 1) * n]
    }

    pub fn plane_field(&self, c: usize) -> Field {
        Field::from_vec(self.width, self.height, self.plane(c).to_vec())
            .expect("plane size matches image")
    }

    pub fn data(&self) -> &[f32] {
        &self.data
    }

    pub fn same_shape(&self, other: &RasterImage) -> bool {
        self.width == other.width && self.height == other.height && self.channels == other.channels
    }

    pub fn crop(&self, x0: usize, y0: usize, w: usize, h: usize) -> RasterImage {
        let planes = (0..self.channels)
            .map(|c| self.plane_field(c).crop(x0, y0, w, h))
            .collect();
        RasterImage::from_planes(self.space, planes).expect("crop keeps plane sizes equal")
    }

    pub fn channel_mean(&self, c: usize) -> f64 {
        let p = self.plane(c);
        p.iter().map(|&v| v as f64).sum::<f64>() / p.len().max(1) as f64
    }
}

/// Double-precision planar image, used where compositing needs more than
/// single precision.
#[derive(Clone, Debug, PartialEq)]
pub struct Image64 {
    width: usize,
    height: usize,
    channels: usize,
    space: ColorSpace,
    data: Vec<f64>,
}

impl Image64 {
    pub fn new(width: usize, height: usize, channels: usize, space: ColorSpace) -> Self {
        Self {
            width,
            height,
            channels,
            space,
            data: vec![0.0; width * height * channels],
        }
    }

    pub fn from_raster(img: &RasterImage) -> Self {
        Self {
            width: img.width,
            height: img.height,
            channels: img.channels,
            space: img.space,
            data: img.data.iter().map(|&v| v as f64).collect(),
        }
    }

    pub fn to_raster(&self) -> RasterImage {
        RasterImage {
            width: self.width,
            height: self.height,
            channels: self.channels,
            space: self.space,
            data: self.data.iter().map(|&v| v as f32).collect(),
        }
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
    pub fn channels(&self) -> usize {
        self.channels
    }

    #[inline]
    pub fn space(&self) -> ColorSpace {
        self.space
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize, c: usize) -> f64 {
        self.data[(c * self.height + y) * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, c: usize, v: f64) {
        self.data[(c * self.height + y) * self.width + x] = v;
    }

    pub fn plane(&self, c: usize) -> &[f64] {
        let n = self.width * self.height;
        &self.data[c * n..(c + 1) * n]
    }

    pub fn plane_mut(&mut self, c: usize) -> &mut [f64] {
        let n = self.width * self.height;
        &mut self.data[c * n..(c + 1) * n]
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn same_shape(&self, other: &Image64) -> bool {
        self.width == other.width && self.height == other.height && self.channels == other.channels
    }

    pub fn channel_mean(&self, c: usize) -> f64 {
        let p = self.plane(c);
        p.iter().sum::<f64>() / p.len().max(1) as f64
    }
}

/// Binary occupancy raster.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mask {
    width: usize,
    height: usize,
    data: Vec<bool>,
}

impl Mask {
    pub fn new(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            data: vec![false; width * height],
        }
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        Self {
            width,
            height,
            data,
        }
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
    pub fn get(&self, x: usize, y: usize) -> bool {
        self.data[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, v: bool) {
        self.data[y * self.width + x] = v;
    }

    pub fn data(&self) -> &[bool] {
        &self.data
    }

    pub fn count(&self) -> usize {
        self.data.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.data.iter().any(|&b| b)
    }

    pub fn to_field(&self) -> Field {
        Field::from_vec(
            self.width,
            self.height,
            self.data.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect(),
        )
        .expect("mask size matches field")
    }

    /// Number of 8-connected foreground components.
    pub fn components(&self) -> usize {
        self.label_components().1
    }

    /// Keeps only the largest 8-connected foreground component (first in
    /// raster order on ties).
    pub fn largest_component(&self) -> Mask {
        let (labels, n) = self.label_components();
        if n <= 1 {
            return self.clone();
        }
        let mut sizes = vec![0usize; n];
        for &l in labels.iter().flatten() {
            sizes[l] += 1;
        }
        let best = (0..n).max_by_key(|&i| (sizes[i], std::cmp::Reverse(i))).unwrap_or(0);
        Mask {
            width: self.width,
            height: self.height,
            data: labels.iter().map(|l| *l == Some(best)).collect(),
        }
    }

    fn label_components(&self) -> (Vec<Option<usize>>, usize) {
        let (w, h) = (self.width, self.height);
        let mut labels = vec![None; w * h];
        let mut next = 0;
        let mut stack = Vec::new();
        for start in 0..w * h {
            if !self.data[start] || labels[start].is_some() {
                continue;
            }
            labels[start] = Some(next);
            stack.push(start);
            while let Some(i) = stack.pop() {
                let (x, y) = ((i % w) as isize, (i / w) as isize);
                for dy in -1..=1 {
                    for dx in -1..=1 {
                        let (nx, ny) = (x + dx, y + dy);
                        if nx < 0 || ny < 0 || nx >= w as isize || ny >= h as isize {
                            continue;
                        }
                        let j = ny as usize * w + nx as usize;
                        if self.data[j] && labels[j].is_none() {
                            labels[j] = Some(next);
                            stack.push(j);
                        }
                    }
                }
            }
            next += 1;
        }
        (labels, next)
    }

    /// Tight bounding box `(x0, y0, w, h)` of the foreground, `None` when empty.
    pub fn bounding_box(&self) -> Option<(usize, usize, usize, usize)> {
        let (mut x0, mut y0, mut x1, mut y1) = (usize::MAX, usize::MAX, 0, 0);
        for y in 0..self.height {
            for x in 0..self.width {
                if self.get(x, y) {
                    x0 = x0.min(x);
                    y0 = y0.min(y);
                    x1 = x1.max(x);
                    y1 = y1.max(y);
                }
            }
        }
        (x0 != usize::MAX).then(|| (x0, y0, x1 - x0 + 1, y1 - y0 + 1))
    }

    pub fn crop(&self, x0: usize, y0: usize, w: usize, h: usize) -> Mask {
        Mask::from_fn(w, h, |x, y| self.get(x0 + x, y0 + y))
    }
}
