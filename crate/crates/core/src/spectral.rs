//! Cone sensitivity curves and visible-spectrum rendering.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::color::{ImageBuffer, PixelSrgb};
use crate::{Error, Result};

/// Photoreceptor classes. `Uv` and `Ir` exist only for augmentation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConeClass {
    S,
    M,
    L,
    Uv,
    Ir,
}

impl ConeClass {
    pub const ALL: [ConeClass; 5] = [
        ConeClass::S,
        ConeClass::M,
        ConeClass::L,
        ConeClass::Uv,
        ConeClass::Ir,
    ];

    pub fn is_visible(self) -> bool {
        matches!(self, ConeClass::S | ConeClass::M | ConeClass::L)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ConeClass::S => "s",
            ConeClass::M => "m",
            ConeClass::L => "l",
            ConeClass::Uv => "uv",
            ConeClass::Ir => "ir",
        }
    }
}

impl fmt::Display for ConeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ConeClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "s" => Ok(ConeClass::S),
            "m" => Ok(ConeClass::M),
            "l" => Ok(ConeClass::L),
            "uv" => Ok(ConeClass::Uv),
            "ir" => Ok(ConeClass::Ir),
            _ => Err(Error::invalid("cone", format!("unknown cone class `{s}`"))),
        }
    }
}

/// A truncated Gaussian sensitivity curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralResponse {
    pub cone: ConeClass,
    pub peak_nm: f64,
    pub lo_nm: f64,
    pub hi_nm: f64,
    /// Gaussian standard deviation.
    pub width_nm: f64,
}

impl SpectralResponse {
    pub fn new(
        cone: ConeClass,
        peak_nm: f64,
        lo_nm: f64,
        hi_nm: f64,
        width_nm: f64,
    ) -> Result<Self> {
        if !(lo_nm < peak_nm && peak_nm < hi_nm) {
            return Err(Error::invalid(
                "peak_nm",
                format!("need lo < peak < hi, got {lo_nm} / {peak_nm} / {hi_nm}"),
            ));
        }
        if !(width_nm > 0.0) || !width_nm.is_finite() {
            return Err(Error::invalid("width_nm", "must be positive"));
        }
        Ok(SpectralResponse {
            cone,
            peak_nm,
            lo_nm,
            hi_nm,
            width_nm,
        })
    }

    /// Short-wavelength cone: peak 424 nm, 400-500 nm.
    pub const S: SpectralResponse = SpectralResponse {
        cone: ConeClass::S,
        peak_nm: 424.0,
        lo_nm: 400.0,
        hi_nm: 500.0,
        width_nm: 23.0,
    };

    /// Medium-wavelength cone: peak 534 nm, 450-630 nm.
    pub const M: SpectralResponse = SpectralResponse {
        cone: ConeClass::M,
        peak_nm: 534.0,
        lo_nm: 450.0,
        hi_nm: 630.0,
        width_nm: 35.0,
    };

    /// Long-wavelength cone: peak 564 nm, 500-700 nm.
    pub const L: SpectralResponse = SpectralResponse {
        cone: ConeClass::L,
        peak_nm: 564.0,
        lo_nm: 500.0,
        hi_nm: 700.0,
        width_nm: 38.0,
    };

    /// Ultraviolet augmentation band, nominal peak 370 nm.
    pub const UV: SpectralResponse = SpectralResponse {
        cone: ConeClass::Uv,
        peak_nm: 370.0,
        lo_nm: 320.0,
        hi_nm: 400.0,
        width_nm: 15.0,
    };

    /// Infrared augmentation band. The nominal 630 nm peak sits inside the
    /// visible red; a near-IR value (e.g. 850 nm) is probably what was meant,
    /// but 630 nm is kept as the default.
    pub const IR: SpectralResponse = SpectralResponse {
        cone: ConeClass::Ir,
        peak_nm: 630.0,
        lo_nm: 580.0,
        hi_nm: 700.0,
        width_nm: 20.0,
    };

    pub fn for_cone(cone: ConeClass) -> SpectralResponse {
        match cone {
            ConeClass::S => Self::S,
            ConeClass::M => Self::M,
            ConeClass::L => Self::L,
            ConeClass::Uv => Self::UV,
            ConeClass::Ir => Self::IR,
        }
    }
}

/// Relative sensitivity in [0, 1]; exactly 1 at the peak and 0 outside the
/// support. Non-positive wavelengths give 0.
pub fn cone_response(r: &SpectralResponse, lambda_nm: f64) -> f64 {
    if !(lambda_nm > 0.0) || lambda_nm < r.lo_nm || lambda_nm > r.hi_nm {
        return 0.0;
    }
    let d = lambda_nm - r.peak_nm;
    (-(d * d) / (2.0 * r.width_nm * r.width_nm)).exp()
}

pub const VISIBLE_MIN_NM: f64 = 380.0;
pub const VISIBLE_MAX_NM: f64 = 750.0;

/// Piecewise-linear visible-spectrum approximation.
///
/// Hue ramp breakpoints (nm): 380 violet (half red), 440 blue, 490 cyan, 525 green,
/// 580 yellow, 620 red. Intensity rolls off linearly from 0.3 at 380 nm to 1
/// at 420 nm and from 1 at 700 nm to 0.3 at 750 nm. No gamma is applied, so
/// adjacent 1 nm samples never differ by more than 8 code values.
pub fn wavelength_to_rgb(lambda_nm: f64) -> PixelSrgb {
    let l = lambda_nm;
    if !(VISIBLE_MIN_NM..=VISIBLE_MAX_NM).contains(&l) {
        return PixelSrgb::BLACK;
    }
    let (r, g, b) = if l < 440.0 {
        (0.5 * (440.0 - l) / 60.0, 0.0, 1.0)
    } else if l < 490.0 {
        (0.0, (l - 440.0) / 50.0, 1.0)
    } else if l < 525.0 {
        (0.0, 1.0, -(l - 525.0) / 35.0)
    } else if l < 580.0 {
        ((l - 525.0) / 55.0, 1.0, 0.0)
    } else if l < 620.0 {
        (1.0, -(l - 620.0) / 40.0, 0.0)
    } else {
        (1.0, 0.0, 0.0)
    };
    let falloff = if l < 420.0 {
        0.3 + 0.7 * (l - 380.0) / 40.0
    } else if l <= 700.0 {
        1.0
    } else {
        0.3 + 0.7 * (750.0 - l) / 50.0
    };
    let q = |c: f64| (255.0 * c * falloff).round().clamp(0.0, 255.0) as u8;
    PixelSrgb::new(q(r), q(g), q(b))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RainbowSpec {
    pub width: u32,
    pub height: u32,
    pub lambda_min_nm: f64,
    pub lambda_max_nm: f64,
}

impl RainbowSpec {
    pub fn new(width: u32, height: u32) -> Self {
        RainbowSpec {
            width,
            height,
            lambda_min_nm: VISIBLE_MIN_NM,
            lambda_max_nm: VISIBLE_MAX_NM,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.width == 0 {
            return Err(Error::invalid("width", "must be at least 1"));
        }
        if self.height == 0 {
            return Err(Error::invalid("height", "must be at least 1"));
        }
        if !(self.lambda_min_nm < self.lambda_max_nm) {
            return Err(Error::invalid(
                "lambda_min_nm",
                format!("must be below lambda_max_nm ({})", self.lambda_max_nm),
            ));
        }
        Ok(())
    }

    /// Wavelength shown in column `x`: `lambda_max` at the left edge,
    /// `lambda_min` at the right edge.
    pub fn wavelength_at(&self, x: u32) -> f64 {
        if self.width <= 1 {
            return self.lambda_max_nm;
        }
        let t = x as f64 / (self.width - 1) as f64;
        self.lambda_max_nm + (self.lambda_min_nm - self.lambda_max_nm) * t
    }
}

impl Default for RainbowSpec {
    fn default() -> Self {
        RainbowSpec::new(750, 100)
    }
}

/// Renders the spectrum red (left) to violet (right); every row is identical.
pub fn render_rainbow(spec: &RainbowSpec) -> Result<ImageBuffer> {
    spec.validate()?;
    let row: Vec<PixelSrgb> = (0..spec.width)
        .map(|x| wavelength_to_rgb(spec.wavelength_at(x)))
        .collect();
    ImageBuffer::from_fn(spec.width, spec.height, |x, _| row[x as usize])
}
