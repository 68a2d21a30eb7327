//! Fusion of non-visible band images (UV, IR) into a visible image as a
//! false-color tint.

use serde::{Deserialize, Serialize};

use crate::color::{decode_channel, encode_channel, srgb_decode, ImageBuffer, PixelSrgb};
use crate::spectral::{ConeClass, SpectralResponse};
use crate::{Error, Result};

pub const DEFAULT_UV_COLOR: PixelSrgb = PixelSrgb::new(130, 0, 255);
pub const DEFAULT_IR_COLOR: PixelSrgb = PixelSrgb::new(255, 40, 40);
pub const DEFAULT_MIX: f64 = 0.5;

/// Single-channel 8-bit intensity image for one extra band.
#[derive(Debug, Clone, PartialEq)]
pub struct BandImage {
    band: ConeClass,
    peak_nm: f64,
    width: u32,
    height: u32,
    data: Vec<u8>,
}

impl BandImage {
    /// `band` must be `Uv` or `Ir`; the peak defaults to the band preset.
    pub fn new(band: ConeClass, width: u32, height: u32, data: Vec<u8>) -> Result<Self> {
        if band.is_visible() {
            return Err(Error::invalid(
                "band",
                format!("`{band}` is not an augmentation band"),
            ));
        }
        if width == 0 || height == 0 || data.len() != width as usize * height as usize {
            return Err(Error::invalid(
                "band",
                format!(
                    "{width}x{height} band needs {} samples, got {}",
                    width as usize * height as usize,
                    data.len()
                ),
            ));
        }
        Ok(BandImage {
            band,
            peak_nm: SpectralResponse::for_cone(band).peak_nm,
            width,
            height,
            data,
        })
    }

    /// Band intensity from an RGB image, using its red channel.
    pub fn from_image(band: ConeClass, img: &ImageBuffer) -> Result<Self> {
        let data = img.pixels().iter().map(|p| p.r).collect();
        Self::new(band, img.width(), img.height(), data)
    }

    pub fn with_peak(mut self, peak_nm: f64) -> Self {
        self.peak_nm = peak_nm;
        self
    }

    pub fn band(&self) -> ConeClass {
        self.band
    }

    pub fn peak_nm(&self) -> f64 {
        self.peak_nm
    }

    pub fn dimensions(&self) -> (u32, u32) {
        (self.width, self.height)
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AugmentConfig {
    pub uv_enabled: bool,
    pub ir_enabled: bool,
    pub mix: f64,
    pub uv_display_color: PixelSrgb,
    pub ir_display_color: PixelSrgb,
}

impl Default for AugmentConfig {
    fn default() -> Self {
        AugmentConfig {
            uv_enabled: true,
            ir_enabled: true,
            mix: DEFAULT_MIX,
            uv_display_color: DEFAULT_UV_COLOR,
            ir_display_color: DEFAULT_IR_COLOR,
        }
    }
}

impl AugmentConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.mix) {
            return Err(Error::invalid(
                "augment.mix",
                format!("must be in [0, 1], got {}", self.mix),
            ));
        }
        Ok(())
    }

    fn enabled(&self, band: ConeClass) -> bool {
        match band {
            ConeClass::Uv => self.uv_enabled,
            ConeClass::Ir => self.ir_enabled,
            _ => false,
        }
    }

    fn tint(&self, band: ConeClass) -> PixelSrgb {
        match band {
            ConeClass::Ir => self.ir_display_color,
            _ => self.uv_display_color,
        }
    }
}

/// Per pixel, blends toward the band's display color in linear light with
/// weight `mix * intensity / 255`. Identity when the band is disabled.
pub fn fuse_band(img: &ImageBuffer, band: &BandImage, cfg: &AugmentConfig) -> Result<ImageBuffer> {
    cfg.validate()?;
    if band.dimensions() != img.dimensions() {
        return Err(Error::DimensionMismatch {
            what: "band image",
            expected_w: img.width(),
            expected_h: img.height(),
            actual_w: band.width,
            actual_h: band.height,
        });
    }
    if !cfg.enabled(band.band) {
        return Ok(img.clone());
    }
    let tint = srgb_decode(cfg.tint(band.band));
    let mut out = img.clone();
    for (p, &i) in out.pixels_mut().iter_mut().zip(&band.data) {
        let w = cfg.mix * i as f64 / 255.0;
        let mix = |c: u8, t: f64| encode_channel((1.0 - w) * decode_channel(c) + w * t);
        *p = PixelSrgb::new(mix(p.r, tint.r), mix(p.g, tint.g), mix(p.b, tint.b));
    }
    Ok(out)
}

/// UV first, then IR.
pub fn fuse_pentachromatic(
    img: &ImageBuffer,
    uv: &BandImage,
    ir: &BandImage,
    cfg: &AugmentConfig,
) -> Result<ImageBuffer> {
    if uv.band != ConeClass::Uv {
        return Err(Error::invalid("band", "first band must be UV"));
    }
    if ir.band != ConeClass::Ir {
        return Err(Error::invalid("band", "second band must be IR"));
    }
    let after_uv = fuse_band(img, uv, cfg)?;
    fuse_band(&after_uv, ir, cfg)
}
