//! Color representations and conversions.
//!
//! Display pixels are 8-bit gamma-encoded sRGB ([`PixelSrgb`]). Anything
//! that mixes light (matrix transforms, blends, gains) happens on
//! [`LinearRgb`] in `f64` and is clamped and quantized once, on the way out.

use std::sync::LazyLock;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub type Mat3 = [[f64; 3]; 3];

/// Linear sRGB (D65) to CIE XYZ, IEC 61966-2-1.
pub const SRGB_TO_XYZ: Mat3 = [
    [0.4124564, 0.3575761, 0.1804375],
    [0.2126729, 0.7151522, 0.0721750],
    [0.0193339, 0.1191920, 0.9503041],
];

/// Hunt-Pointer-Estevez XYZ to LMS, normalized to D65.
pub const XYZ_TO_LMS_HPE: Mat3 = [
    [0.4002, 0.7076, -0.0808],
    [-0.2263, 1.1653, 0.0457],
    [0.0, 0.0, 0.9182],
];

/// `XYZ_TO_LMS_HPE * SRGB_TO_XYZ`, linear sRGB to cone excitations.
pub const RGB_TO_LMS: Mat3 = [
    [0.3139902162, 0.63951293834, 0.04649754622000001],
    [0.15537240627999999, 0.7578944616300001, 0.08670141862000001],
    [0.01775238698, 0.10944209440000001, 0.87256922462],
];

/// Inverse of [`RGB_TO_LMS`].
pub const LMS_TO_RGB: Mat3 = [
    [5.472212058380287, -4.641960098354471, 0.16963707682797405],
    [-1.1252418955335692, 2.2931709380606233, -0.1678952022237088],
    [
        0.029801651173470223,
        -0.19318072825714036,
        1.1636478927838123,
    ],
];

/// Rec. 709 / sRGB relative luminance weights on linear RGB.
pub const LUMINANCE_WEIGHTS: [f64; 3] = [0.2126729, 0.7151522, 0.0721750];

#[inline]
pub fn mat_vec(m: &Mat3, v: [f64; 3]) -> [f64; 3] {
    [
        m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
        m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
        m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2],
    ]
}

pub fn mat_mul(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut out = [[0.0; 3]; 3];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

/// 8-bit display sRGB pixel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct PixelSrgb {
    pub r: u8,
    pub g: u8,
    pub b: u8,
}

impl PixelSrgb {
    pub const BLACK: PixelSrgb = PixelSrgb::new(0, 0, 0);
    pub const WHITE: PixelSrgb = PixelSrgb::new(255, 255, 255);

    pub const fn new(r: u8, g: u8, b: u8) -> Self {
        PixelSrgb { r, g, b }
    }

    pub const fn gray(v: u8) -> Self {
        PixelSrgb { r: v, g: v, b: v }
    }

    pub fn channels(self) -> [u8; 3] {
        [self.r, self.g, self.b]
    }

    pub fn is_gray(self) -> bool {
        self.r == self.g && self.g == self.b
    }

    /// Parses `#rrggbb`, `rrggbb` or `r/g/b`.
    pub fn parse(s: &str) -> Option<Self> {
        let s = s.trim();
        if let Some(parts) = s.split_once('/') {
            let mut it = std::iter::once(parts.0).chain(parts.1.split('/'));
            let r = it.next()?.trim().parse().ok()?;
            let g = it.next()?.trim().parse().ok()?;
            let b = it.next()?.trim().parse().ok()?;
            return it.next().is_none().then_some(PixelSrgb::new(r, g, b));
        }
        let hex = s.strip_prefix('#').unwrap_or(s);
        if hex.len() != 6 || !hex.is_ascii() {
            return None;
        }
        let byte = |i: usize| u8::from_str_radix(&hex[i..i + 2], 16).ok();
        Some(PixelSrgb::new(byte(0)?, byte(2)?, byte(4)?))
    }

    pub fn to_hex(self) -> String {
        format!("#{:02x}{:02x}{:02x}", self.r, self.g, self.b)
    }
}

impl From<[u8; 3]> for PixelSrgb {
    fn from(c: [u8; 3]) -> Self {
        PixelSrgb::new(c[0], c[1], c[2])
    }
}

/// Linear-light RGB. Values may leave [0, 1] inside a pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LinearRgb {
    pub r: f64,
    pub g: f64,
    pub b: f64,
}

impl LinearRgb {
    pub const fn new(r: f64, g: f64, b: f64) -> Self {
        LinearRgb { r, g, b }
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.r, self.g, self.b]
    }

    pub fn from_array(v: [f64; 3]) -> Self {
        LinearRgb::new(v[0], v[1], v[2])
    }

    pub fn luminance(self) -> f64 {
        let w = LUMINANCE_WEIGHTS;
        w[0] * self.r + w[1] * self.g + w[2] * self.b
    }

    /// `(1 - t) * self + t * other`.
    pub fn lerp(self, other: LinearRgb, t: f64) -> LinearRgb {
        LinearRgb::new(
            self.r + (other.r - self.r) * t,
            self.g + (other.g - self.g) * t,
            self.b + (other.b - self.b) * t,
        )
    }
}

/// Long / medium / short cone excitations.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LmsTriple {
    pub l: f64,
    pub m: f64,
    pub s: f64,
}

impl LmsTriple {
    pub const fn new(l: f64, m: f64, s: f64) -> Self {
        LmsTriple { l, m, s }
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.l, self.m, self.s]
    }

    pub fn from_array(v: [f64; 3]) -> Self {
        LmsTriple::new(v[0], v[1], v[2])
    }
}

/// Hexcone HSV: `h` in degrees [0, 360), `s` and `v` in [0, 1].
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct HsvTriple {
    pub h: f64,
    pub s: f64,
    pub v: f64,
}

impl HsvTriple {
    /// Wraps the hue and clamps saturation and value.
    pub fn new(h: f64, s: f64, v: f64) -> Self {
        let h = h.rem_euclid(360.0);
        HsvTriple {
            h: if h >= 360.0 { 0.0 } else { h },
            s: s.clamp(0.0, 1.0),
            v: v.clamp(0.0, 1.0),
        }
    }
}

/// CIELAB (D65).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct LabTriple {
    pub l_star: f64,
    pub a_star: f64,
    pub b_star: f64,
}

impl LabTriple {
    pub const fn new(l_star: f64, a_star: f64, b_star: f64) -> Self {
        LabTriple {
            l_star,
            a_star,
            b_star,
        }
    }
}

// sRGB transfer function

/// sRGB EOTF for a normalized channel value.
pub fn srgb_eotf(v: f64) -> f64 {
    if v <= 0.04045 {
        v / 12.92
    } else {
        ((v + 0.055) / 1.055).powf(2.4)
    }
}

/// Inverse sRGB EOTF for a normalized linear value.
pub fn srgb_oetf(x: f64) -> f64 {
    if x <= 0.0031308 {
        12.92 * x
    } else {
        1.055 * x.powf(1.0 / 2.4) - 0.055
    }
}

static DECODE_LUT: LazyLock<[f64; 256]> = LazyLock::new(|| {
    let mut lut = [0.0; 256];
    for (i, v) in lut.iter_mut().enumerate() {
        *v = srgb_eotf(i as f64 / 255.0);
    }
    lut
});

const ENCODE_BUCKETS: usize = 4096;

// thresholds[k - 1] is the smallest linear value that encodes to k, the
// linear image of the code boundary (k - 0.5) / 255. Counting thresholds at
// or below x is round-half-away-from-zero of 255 * oetf(x). Adjacent
// thresholds are at least 1 / (255 * 12.92) > 1 / ENCODE_BUCKETS apart, so
// each bucket holds at most one and a single comparison finishes the count.
struct EncodeTable {
    thresholds: [f64; 256],
    bucket_base: [u8; ENCODE_BUCKETS],
}

static ENCODE: LazyLock<EncodeTable> = LazyLock::new(|| {
    let mut thresholds = [f64::INFINITY; 256];
    for (k, v) in thresholds.iter_mut().take(255).enumerate() {
        *v = srgb_eotf((k as f64 + 0.5) / 255.0);
    }
    let mut bucket_base = [0u8; ENCODE_BUCKETS];
    for (i, b) in bucket_base.iter_mut().enumerate() {
        let lo = i as f64 / ENCODE_BUCKETS as f64;
        *b = thresholds.partition_point(|&t| t <= lo) as u8;
    }
    EncodeTable {
        thresholds,
        bucket_base,
    }
});

#[inline]
pub fn decode_channel(c: u8) -> f64 {
    DECODE_LUT[c as usize]
}

/// Clamps to [0, 1] and quantizes to the nearest 8-bit code (ties away
/// from zero). NaN encodes to 0.
#[inline]
pub fn encode_channel(x: f64) -> u8 {
    if !(x > 0.0) {
        return 0;
    }
    if x >= 1.0 {
        return 255;
    }
    let table = &*ENCODE;
    let base = table.bucket_base[(x * ENCODE_BUCKETS as f64) as usize];
    base + (x >= table.thresholds[base as usize]) as u8
}

pub fn srgb_decode(p: PixelSrgb) -> LinearRgb {
    LinearRgb::new(
        decode_channel(p.r),
        decode_channel(p.g),
        decode_channel(p.b),
    )
}

pub fn srgb_encode(c: LinearRgb) -> PixelSrgb {
    PixelSrgb::new(
        encode_channel(c.r),
        encode_channel(c.g),
        encode_channel(c.b),
    )
}

pub fn rgb_to_lms(c: LinearRgb) -> LmsTriple {
    LmsTriple::from_array(mat_vec(&RGB_TO_LMS, c.to_array()))
}

pub fn lms_to_rgb(t: LmsTriple) -> LinearRgb {
    LinearRgb::from_array(mat_vec(&LMS_TO_RGB, t.to_array()))
}

pub fn rgb_to_hsv(p: PixelSrgb) -> HsvTriple {
    let r = p.r as f64 / 255.0;
    let g = p.g as f64 / 255.0;
    let b = p.b as f64 / 255.0;
    let max = r.max(g).max(b);
    let min = r.min(g).min(b);
    let delta = max - min;

    let h = if delta == 0.0 {
        0.0
    } else if max == r {
        60.0 * ((g - b) / delta).rem_euclid(6.0)
    } else if max == g {
        60.0 * ((b - r) / delta + 2.0)
    } else {
        60.0 * ((r - g) / delta + 4.0)
    };
    let s = if max == 0.0 { 0.0 } else { delta / max };
    HsvTriple::new(h, s, max)
}

pub fn hsv_to_rgb(hsv: HsvTriple) -> PixelSrgb {
    let HsvTriple { h, s, v } = HsvTriple::new(hsv.h, hsv.s, hsv.v);
    let c = v * s;
    let sector = h / 60.0;
    let x = c * (1.0 - (sector.rem_euclid(2.0) - 1.0).abs());
    let (r, g, b) = match sector as u32 {
        0 => (c, x, 0.0),
        1 => (x, c, 0.0),
        2 => (0.0, c, x),
        3 => (0.0, x, c),
        4 => (x, 0.0, c),
        _ => (c, 0.0, x),
    };
    let m = v - c;
    let q = |u: f64| ((u + m) * 255.0).round().clamp(0.0, 255.0) as u8;
    PixelSrgb::new(q(r), q(g), q(b))
}

/// D65 reference white in XYZ, taken as the image of linear RGB (1, 1, 1)
/// so that sRGB white maps to a* = b* = 0.
pub fn white_xyz() -> [f64; 3] {
    mat_vec(&SRGB_TO_XYZ, [1.0, 1.0, 1.0])
}

fn lab_f(t: f64) -> f64 {
    const EPSILON: f64 = 216.0 / 24389.0;
    const KAPPA: f64 = 24389.0 / 27.0;
    if t > EPSILON {
        t.cbrt()
    } else {
        (KAPPA * t + 16.0) / 116.0
    }
}

pub fn linear_to_lab(c: LinearRgb) -> LabTriple {
    let xyz = mat_vec(&SRGB_TO_XYZ, c.to_array());
    let w = white_xyz();
    let fx = lab_f(xyz[0] / w[0]);
    let fy = lab_f(xyz[1] / w[1]);
    let fz = lab_f(xyz[2] / w[2]);
    LabTriple::new(116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz))
}

pub fn rgb_to_lab(p: PixelSrgb) -> LabTriple {
    linear_to_lab(srgb_decode(p))
}

/// CIE76 color difference.
pub fn delta_e(a: LabTriple, b: LabTriple) -> f64 {
    let dl = a.l_star - b.l_star;
    let da = a.a_star - b.a_star;
    let db = a.b_star - b.b_star;
    (dl * dl + da * da + db * db).sqrt()
}

/// Row-major 8-bit sRGB raster.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImageBuffer {
    width: u32,
    height: u32,
    data: Vec<PixelSrgb>,
}

impl ImageBuffer {
    pub fn new(width: u32, height: u32, data: Vec<PixelSrgb>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::invalid(
                "image",
                format!("dimensions must be positive, got {width}x{height}"),
            ));
        }
        let expected = width as usize * height as usize;
        if data.len() != expected {
            return Err(Error::invalid(
                "image",
                format!(
                    "{width}x{height} needs {expected} pixels, got {}",
                    data.len()
                ),
            ));
        }
        Ok(ImageBuffer {
            width,
            height,
            data,
        })
    }

    pub fn filled(width: u32, height: u32, p: PixelSrgb) -> Result<Self> {
        Self::new(width, height, vec![p; width as usize * height as usize])
    }

    pub fn from_fn(
        width: u32,
        height: u32,
        mut f: impl FnMut(u32, u32) -> PixelSrgb,
    ) -> Result<Self> {
        let mut data = Vec::with_capacity(width as usize * height as usize);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        Self::new(width, height, data)
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn dimensions(&self) -> (u32, u32) {
        (self.width, self.height)
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn pixels(&self) -> &[PixelSrgb] {
        &self.data
    }

    pub fn pixels_mut(&mut self) -> &mut [PixelSrgb] {
        &mut self.data
    }

    pub fn into_pixels(self) -> Vec<PixelSrgb> {
        self.data
    }

    #[inline]
    pub fn get(&self, x: u32, y: u32) -> PixelSrgb {
        self.data[y as usize * self.width as usize + x as usize]
    }

    #[inline]
    pub fn set(&mut self, x: u32, y: u32, p: PixelSrgb) {
        let w = self.width as usize;
        self.data[y as usize * w + x as usize] = p;
    }

    pub fn row(&self, y: u32) -> &[PixelSrgb] {
        let w = self.width as usize;
        &self.data[y as usize * w..(y as usize + 1) * w]
    }

    /// Applies `f` to every pixel, keeping dimensions.
    pub fn map_pixels(&self, f: impl Fn(PixelSrgb) -> PixelSrgb) -> ImageBuffer {
        ImageBuffer {
            width: self.width,
            height: self.height,
            data: self.data.iter().map(|&p| f(p)).collect(),
        }
    }

    /// Copies the `w`x`h` region whose top-left corner is (`x0`, `y0`).
    pub fn crop(&self, x0: u32, y0: u32, w: u32, h: u32) -> Result<ImageBuffer> {
        if x0 + w > self.width || y0 + h > self.height {
            return Err(Error::invalid("crop", "region exceeds image bounds"));
        }
        ImageBuffer::from_fn(w, h, |x, y| self.get(x0 + x, y0 + y))
    }

    pub fn to_rgb_bytes(&self) -> Vec<u8> {
        self.data.iter().flat_map(|p| p.channels()).collect()
    }
}
