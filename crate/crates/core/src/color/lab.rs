//! sRGB ↔ CIELAB conversions (D65 white, 2° observer).

use serde::{Deserialize, Serialize};

use crate::image::{ColorSpace, RasterImage};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LabColor {
    pub l: f32,
    pub a: f32,
    pub b: f32,
}

impl LabColor {
    pub const fn new(l: f32, a: f32, b: f32) -> Self {
        Self { l, a, b }
    }

    pub fn to_array(self) -> [f32; 3] {
        [self.l, self.a, self.b]
    }

    /// `t * self + (1 - t) * other`, channel-wise.
    pub fn lerp(self, other: LabColor, t: f32) -> LabColor {
        LabColor {
            l: t * self.l + (1.0 - t) * other.l,
            a: t * self.a + (1.0 - t) * other.a,
            b: t * self.b + (1.0 - t) * other.b,
        }
    }
}

const RGB_TO_XYZ: [[f64; 3]; 3] = [
    [0.412_456_4, 0.357_576_1, 0.180_437_5],
    [0.212_672_9, 0.715_152_2, 0.072_175_0],
    [0.019_333_9, 0.119_192_0, 0.950_304_1],
];

const XYZ_TO_RGB: [[f64; 3]; 3] = [
    [3.240_454_2, -1.537_138_5, -0.498_531_4],
    [-0.969_266_0, 1.876_010_8, 0.041_556_0],
    [0.055_643_4, -0.204_025_9, 1.057_225_2],
];

// Reference white = image of linear RGB (1, 1, 1), so that neutral greys map
// to a = b = 0.
const WHITE: [f64; 3] = [
    0.412_456_4 + 0.357_576_1 + 0.180_437_5,
    0.212_672_9 + 0.715_152_2 + 0.072_175_0,
    0.019_333_9 + 0.119_192_0 + 0.950_304_1,
];

const DELTA: f64 = 6.0 / 29.0;

#[inline]
fn lab_f(t: f64) -> f64 {
    if t > DELTA * DELTA * DELTA {
        t.cbrt()
    } else {
        t / (3.0 * DELTA * DELTA) + 4.0 / 29.0
    }
}

#[inline]
fn lab_f_inv(t: f64) -> f64 {
    if t > DELTA {
        t * t * t
    } else {
        3.0 * DELTA * DELTA * (t - 4.0 / 29.0)
    }
}

#[inline]
pub fn srgb_decode(v: f64) -> f64 {
    if v <= 0.040_45 {
        v / 12.92
    } else {
        ((v + 0.055) / 1.055).powf(2.4)
    }
}

#[inline]
pub fn srgb_encode(v: f64) -> f64 {
    if v <= 0.003_130_8 {
        12.92 * v
    } else {
        1.055 * v.powf(1.0 / 2.4) - 0.055
    }
}

fn mat_mul(m: &[[f64; 3]; 3], v: [f64; 3]) -> [f64; 3] {
    [
        m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
        m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
        m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2],
    ]
}

pub fn linear_rgb_to_lab(rgb: [f64; 3]) -> LabColor {
    let xyz = mat_mul(&RGB_TO_XYZ, rgb);
    let fx = lab_f(xyz[0] / WHITE[0]);
    let fy = lab_f(xyz[1] / WHITE[1]);
    let fz = lab_f(xyz[2] / WHITE[2]);
    LabColor {
        l: (116.0 * fy - 16.0) as f32,
        a: (500.0 * (fx - fy)) as f32,
        b: (200.0 * (fy - fz)) as f32,
    }
}

pub fn lab_to_linear_rgb(lab: LabColor) -> [f64; 3] {
    let fy = (lab.l as f64 + 16.0) / 116.0;
    let fx = fy + lab.a as f64 / 500.0;
    let fz = fy - lab.b as f64 / 200.0;
    let xyz = [
        WHITE[0] * lab_f_inv(fx),
        WHITE[1] * lab_f_inv(fy),
        WHITE[2] * lab_f_inv(fz),
    ];
    mat_mul(&XYZ_TO_RGB, xyz)
}

pub fn srgb_to_lab(rgb: [u8; 3]) -> LabColor {
    linear_rgb_to_lab(rgb.map(|c| srgb_decode(c as f64 / 255.0)))
}

/// Converts to 8-bit sRGB; the flag reports whether any channel had to be
/// clamped into gamut.
pub fn lab_to_srgb8(lab: LabColor) -> ([u8; 3], bool) {
    let lin = lab_to_linear_rgb(lab);
    let mut clipped = false;
    let out = lin.map(|c| {
        let v = srgb_encode(c) * 255.0;
        if !(-0.5..=255.5).contains(&v) {
            clipped = true;
        }
        v.round().clamp(0.0, 255.0) as u8
    });
    (out, clipped)
}

/// Relative luminance (CIE Y, white = 1) of a CIELAB lightness.
#[inline]
pub fn lightness_to_luminance(l: f64) -> f64 {
    WHITE[1] * lab_f_inv((l + 16.0) / 116.0)
}

/// Relative luminance of an 8-bit sRGB triple.
#[inline]
pub fn srgb8_luminance(rgb: [u8; 3]) -> f64 {
    let lin = rgb.map(|c| srgb_decode(c as f64 / 255.0));
    RGB_TO_XYZ[1][0] * lin[0] + RGB_TO_XYZ[1][1] * lin[1] + RGB_TO_XYZ[1][2] * lin[2]
}

/// Exports a Lab image as interleaved 8-bit sRGB. Returns the buffer and the
/// number of pixels that needed gamut clamping.
pub fn lab_image_to_srgb8(img: &RasterImage) -> (Vec<u8>, usize) {
    assert_eq!(img.space(), ColorSpace::Lab, "expected a Lab image");
    assert_eq!(img.channels(), 3, "expected three channels");
    let (w, h) = (img.width(), img.height());
    let mut out = Vec::with_capacity(w * h * 3);
    let mut clipped = 0;
    let (l, a, b) = (img.plane(0), img.plane(1), img.plane(2));
    for i in 0..w * h {
        let (rgb, c) = lab_to_srgb8(LabColor::new(l[i], a[i], b[i]));
        clipped += c as usize;
        out.extend_from_slice(&rgb);
    }
    (out, clipped)
}
