//! Correction and assistance operators.
//!
//! None of these try to restore "true" color. They add information an
//! observer with a deficiency can pick up: a red-channel gray rendering, a
//! desaturated helper, a luminance boost on confusable regions, a
//! green-blocking passive filter, and two active modifiers (blinking
//! highlight, border enhancement) driven by a confusion mask.

mod recipe;

pub use recipe::{
    apply_recipe, CorrectionRecipe, Operator, OperatorInfo, ParamInfo, ParamKind, RecipeStep,
    OPERATORS,
};

use crate::color::{
    decode_channel, encode_channel, hsv_to_rgb, rgb_to_hsv, HsvTriple, ImageBuffer, PixelSrgb,
};
use crate::simulate::{confusion_distance_with, DeficiencyProfile, Simulator};
use crate::{Error, Result};

/// Default confusion threshold (CIE76) for masks.
pub const DEFAULT_MASK_TAU: f64 = 10.0;
pub const DEFAULT_GAIN: f64 = 1.3;
pub const DEFAULT_GREEN_ATTENUATION: f64 = 0.2;
/// Gradient magnitude (CIE76 per pixel step) above which a border is drawn.
pub const DEFAULT_EDGE_THRESHOLD: f64 = 8.0;
pub const DEFAULT_BLINK_PERIOD_MS: u64 = 1000;
pub const DEFAULT_HIGHLIGHT: PixelSrgb = PixelSrgb::new(0, 0, 255);
pub const DEFAULT_EDGE_COLOR: PixelSrgb = PixelSrgb::new(255, 255, 0);

/// One flag per pixel, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegionMask {
    width: u32,
    height: u32,
    bits: Vec<bool>,
}

impl RegionMask {
    pub fn new(width: u32, height: u32, bits: Vec<bool>) -> Result<Self> {
        if bits.len() != width as usize * height as usize {
            return Err(Error::invalid(
                "mask",
                "bit count does not match dimensions",
            ));
        }
        Ok(RegionMask {
            width,
            height,
            bits,
        })
    }

    pub fn empty(width: u32, height: u32) -> Self {
        RegionMask {
            width,
            height,
            bits: vec![false; width as usize * height as usize],
        }
    }

    pub fn full(width: u32, height: u32) -> Self {
        RegionMask {
            width,
            height,
            bits: vec![true; width as usize * height as usize],
        }
    }

    pub fn dimensions(&self) -> (u32, u32) {
        (self.width, self.height)
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn get(&self, x: u32, y: u32) -> bool {
        self.bits[y as usize * self.width as usize + x as usize]
    }

    pub fn set(&mut self, x: u32, y: u32, v: bool) {
        let w = self.width as usize;
        self.bits[y as usize * w + x as usize] = v;
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.bits.iter().any(|&b| b)
    }

    pub fn is_subset_of(&self, other: &RegionMask) -> bool {
        self.dimensions() == other.dimensions()
            && self.bits.iter().zip(&other.bits).all(|(&a, &b)| !a || b)
    }

    fn check_matches(&self, img: &ImageBuffer) -> Result<()> {
        if self.dimensions() != img.dimensions() {
            return Err(Error::DimensionMismatch {
                what: "mask",
                expected_w: img.width(),
                expected_h: img.height(),
                actual_w: self.width,
                actual_h: self.height,
            });
        }
        Ok(())
    }
}

/// Blink timing. The first half of each period is the "on" phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlinkState {
    period_ms: u64,
    t_ms: u64,
}

impl BlinkState {
    pub fn new(period_ms: u64, t_ms: u64) -> Result<Self> {
        if period_ms == 0 {
            return Err(Error::invalid("period_ms", "must be positive"));
        }
        Ok(BlinkState { period_ms, t_ms })
    }

    pub fn period_ms(&self) -> u64 {
        self.period_ms
    }

    pub fn t_ms(&self) -> u64 {
        self.t_ms
    }

    /// `floor(2 t / period)` is even.
    pub fn is_on(&self) -> bool {
        let half_periods = (2 * self.t_ms as u128) / self.period_ms as u128;
        half_periods.is_multiple_of(2)
    }
}

/// `(r, g, b) -> (r, r, r)`.
pub fn red_channel_grayscale(img: &ImageBuffer) -> ImageBuffer {
    img.map_pixels(|p| PixelSrgb::gray(p.r))
}

/// HSV saturation forced to 0, which leaves `(v, v, v)` with `v` the
/// largest channel.
pub fn desaturate_helper(img: &ImageBuffer) -> ImageBuffer {
    img.map_pixels(|p| {
        let hsv = rgb_to_hsv(p);
        hsv_to_rgb(HsvTriple::new(hsv.h, 0.0, hsv.v))
    })
}

/// Multiplies HSV value by `gain` on pixels the profile confuses
/// (confusion distance above [`DEFAULT_MASK_TAU`]).
pub fn luminance_equalize(
    img: &ImageBuffer,
    prof: &DeficiencyProfile,
    gain: f64,
) -> Result<ImageBuffer> {
    if !(1.0..=3.0).contains(&gain) {
        return Err(Error::invalid(
            "gain",
            format!("must be in [1, 3], got {gain}"),
        ));
    }
    if gain == 1.0 {
        return Ok(img.clone());
    }
    let sim = Simulator::new(prof);
    Ok(img.map_pixels(|p| {
        if confusion_distance_with(&sim, p) > DEFAULT_MASK_TAU {
            let hsv = rgb_to_hsv(p);
            hsv_to_rgb(HsvTriple::new(hsv.h, hsv.s, hsv.v * gain))
        } else {
            p
        }
    }))
}

/// Emulates a magenta lens: green scaled by `green_attenuation` in linear
/// light, red and blue untouched.
pub fn passive_filter(img: &ImageBuffer, green_attenuation: f64) -> Result<ImageBuffer> {
    if !(0.0..=1.0).contains(&green_attenuation) {
        return Err(Error::invalid(
            "attenuation",
            format!("must be in [0, 1], got {green_attenuation}"),
        ));
    }
    let mut lut = [0u8; 256];
    for (i, v) in lut.iter_mut().enumerate() {
        *v = encode_channel(decode_channel(i as u8) * green_attenuation);
    }
    Ok(img.map_pixels(|p| PixelSrgb::new(p.r, lut[p.g as usize], p.b)))
}

/// Pixels whose confusion distance exceeds `tau`.
pub fn confusion_mask(img: &ImageBuffer, prof: &DeficiencyProfile, tau: f64) -> Result<RegionMask> {
    if !(tau > 0.0) || !tau.is_finite() {
        return Err(Error::invalid(
            "tau",
            format!("must be positive, got {tau}"),
        ));
    }
    let sim = Simulator::new(prof);
    let bits = img
        .pixels()
        .iter()
        .map(|&p| confusion_distance_with(&sim, p) > tau)
        .collect();
    RegionMask::new(img.width(), img.height(), bits)
}

pub fn blink_overlay(
    img: &ImageBuffer,
    mask: &RegionMask,
    state: BlinkState,
    highlight: PixelSrgb,
) -> Result<ImageBuffer> {
    mask.check_matches(img)?;
    if !state.is_on() {
        return Ok(img.clone());
    }
    let mut out = img.clone();
    for (p, &on) in out.pixels_mut().iter_mut().zip(mask.bits()) {
        if on {
            *p = highlight;
        }
    }
    Ok(out)
}

/// Sobel gradient magnitude of a scalar field, scaled by 1/4 so that a
/// straight step of height `d` gives magnitude `d`. Borders replicate.
pub fn sobel_magnitude(field: &[f64], width: u32, height: u32) -> Vec<f64> {
    let (w, h) = (width as i64, height as i64);
    let at = |x: i64, y: i64| field[(y.clamp(0, h - 1) * w + x.clamp(0, w - 1)) as usize];
    let mut out = Vec::with_capacity(field.len());
    for y in 0..h {
        for x in 0..w {
            let gx = (at(x + 1, y - 1) + 2.0 * at(x + 1, y) + at(x + 1, y + 1))
                - (at(x - 1, y - 1) + 2.0 * at(x - 1, y) + at(x - 1, y + 1));
            let gy = (at(x - 1, y + 1) + 2.0 * at(x, y + 1) + at(x + 1, y + 1))
                - (at(x - 1, y - 1) + 2.0 * at(x, y - 1) + at(x + 1, y - 1));
            out.push(0.25 * (gx * gx + gy * gy).sqrt());
        }
    }
    out
}

/// Pixels on the border of regions whose confusion distance changes sharply.
pub fn confusable_edges(
    img: &ImageBuffer,
    prof: &DeficiencyProfile,
    threshold: f64,
) -> Result<RegionMask> {
    if !(threshold > 0.0) || !threshold.is_finite() {
        return Err(Error::invalid(
            "threshold",
            format!("must be positive, got {threshold}"),
        ));
    }
    let field = crate::simulate::confusion_field(img, prof);
    let grad = sobel_magnitude(&field, img.width(), img.height());
    RegionMask::new(
        img.width(),
        img.height(),
        grad.into_iter().map(|g| g > threshold).collect(),
    )
}

pub fn edge_enhance_confusable(
    img: &ImageBuffer,
    prof: &DeficiencyProfile,
    edge_color: PixelSrgb,
) -> ImageBuffer {
    edge_enhance_with_threshold(img, prof, edge_color, DEFAULT_EDGE_THRESHOLD)
        .expect("default threshold is valid")
}

pub fn edge_enhance_with_threshold(
    img: &ImageBuffer,
    prof: &DeficiencyProfile,
    edge_color: PixelSrgb,
    threshold: f64,
) -> Result<ImageBuffer> {
    let edges = confusable_edges(img, prof, threshold)?;
    let mut out = img.clone();
    for (p, &on) in out.pixels_mut().iter_mut().zip(edges.bits()) {
        if on {
            *p = edge_color;
        }
    }
    Ok(out)
}
