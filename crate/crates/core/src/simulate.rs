//! Rendering of an image as seen under a color-vision deficiency.
//!
//! Dichromacies use a single-plane projection in LMS space: the missing
//! cone's signal is replaced by a fixed linear combination of the two
//! remaining cones. The combination is chosen so that two stimuli keep their
//! appearance: equal-energy white (the LMS image of sRGB white) and an
//! anchor primary, blue for the red-green deficiencies and red for
//! tritanopia. Every gray is therefore preserved, and the map is a true
//! projection (applying it twice changes nothing).
//!
//! Anomalous trichromacy blends the original and the dichromat rendering in
//! linear RGB by `severity`. Monochromacy renders relative luminance as gray.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::color::{
    self, decode_channel, encode_channel, mat_mul, mat_vec, rgb_to_lab, srgb_decode, srgb_encode,
    ImageBuffer, LinearRgb, LmsTriple, Mat3, PixelSrgb, LMS_TO_RGB, RGB_TO_LMS,
};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Deficiency {
    Protanopia,
    Deuteranopia,
    Tritanopia,
    Protanomaly,
    Deuteranomaly,
    Tritanomaly,
    Monochromacy,
}

impl Deficiency {
    pub const ALL: [Deficiency; 7] = [
        Deficiency::Protanopia,
        Deficiency::Deuteranopia,
        Deficiency::Tritanopia,
        Deficiency::Protanomaly,
        Deficiency::Deuteranomaly,
        Deficiency::Tritanomaly,
        Deficiency::Monochromacy,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Deficiency::Protanopia => "protanopia",
            Deficiency::Deuteranopia => "deuteranopia",
            Deficiency::Tritanopia => "tritanopia",
            Deficiency::Protanomaly => "protanomaly",
            Deficiency::Deuteranomaly => "deuteranomaly",
            Deficiency::Tritanomaly => "tritanomaly",
            Deficiency::Monochromacy => "monochromacy",
        }
    }

    /// Anomalous kinds accept a severity below 1.
    pub fn is_anomalous(self) -> bool {
        matches!(
            self,
            Deficiency::Protanomaly | Deficiency::Deuteranomaly | Deficiency::Tritanomaly
        )
    }

    /// The dichromacy an anomalous kind degenerates to at full severity.
    pub fn dichromat(self) -> Option<Deficiency> {
        match self {
            Deficiency::Protanopia | Deficiency::Protanomaly => Some(Deficiency::Protanopia),
            Deficiency::Deuteranopia | Deficiency::Deuteranomaly => Some(Deficiency::Deuteranopia),
            Deficiency::Tritanopia | Deficiency::Tritanomaly => Some(Deficiency::Tritanopia),
            Deficiency::Monochromacy => None,
        }
    }

    /// Index of the cone (0 = L, 1 = M, 2 = S) whose signal is lost.
    fn lost_cone(self) -> Option<usize> {
        match self.dichromat()? {
            Deficiency::Protanopia => Some(0),
            Deficiency::Deuteranopia => Some(1),
            _ => Some(2),
        }
    }
}

impl fmt::Display for Deficiency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Deficiency {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().to_ascii_lowercase();
        Deficiency::ALL
            .into_iter()
            .find(|d| d.as_str() == norm)
            .ok_or_else(|| Error::UnknownDeficiency(s.to_string()))
    }
}

impl Serialize for Deficiency {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for Deficiency {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A deficiency kind plus its severity in [0, 1].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ProfileWire")]
pub struct DeficiencyProfile {
    kind: Deficiency,
    severity: f64,
}

#[derive(Deserialize)]
struct ProfileWire {
    kind: Deficiency,
    #[serde(default)]
    severity: Option<f64>,
}

impl TryFrom<ProfileWire> for DeficiencyProfile {
    type Error = Error;

    fn try_from(w: ProfileWire) -> Result<Self> {
        DeficiencyProfile::new(w.kind, w.severity.unwrap_or(1.0))
    }
}

impl DeficiencyProfile {
    /// Validates `severity`; dichromacies and monochromacy are forced to 1.
    pub fn new(kind: Deficiency, severity: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&severity) {
            return Err(Error::invalid(
                "profile.severity",
                format!("must be in [0, 1], got {severity}"),
            ));
        }
        let severity = if kind.is_anomalous() { severity } else { 1.0 };
        Ok(DeficiencyProfile { kind, severity })
    }

    /// Full-severity profile.
    pub fn full(kind: Deficiency) -> Self {
        DeficiencyProfile {
            kind,
            severity: 1.0,
        }
    }

    pub fn kind(&self) -> Deficiency {
        self.kind
    }

    pub fn severity(&self) -> f64 {
        self.severity
    }
}

impl From<Deficiency> for DeficiencyProfile {
    fn from(kind: Deficiency) -> Self {
        DeficiencyProfile::full(kind)
    }
}

/// Coefficients `(a, b)` such that the lost cone is re-expressed as
/// `a * first + b * second` of the two remaining cones, in L, M, S order.
/// Solved so that LMS(white) and LMS(anchor primary) are fixed points.
pub const PROTAN_COEFFS: [f64; 2] = [1.0511829388821905, -0.05116099049868259];
pub const DEUTAN_COEFFS: [f64; 2] = [0.9513091993895777, 0.04866992091127956];
pub const TRITAN_COEFFS: [f64; 2] = [-0.8674473631666539, 1.8672708946785683];

/// LMS-space projection matrix for a dichromacy.
pub fn projection_lms(kind: Deficiency) -> Option<Mat3> {
    let lost = kind.lost_cone()?;
    let coeffs = match lost {
        0 => PROTAN_COEFFS,
        1 => DEUTAN_COEFFS,
        _ => TRITAN_COEFFS,
    };
    let mut m: Mat3 = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    let kept: Vec<usize> = (0..3).filter(|&i| i != lost).collect();
    m[lost] = [0.0; 3];
    m[lost][kept[0]] = coeffs[0];
    m[lost][kept[1]] = coeffs[1];
    Some(m)
}

/// Replaces the lost cone signal; identity for monochromacy.
pub fn project_lms(t: LmsTriple, kind: Deficiency) -> LmsTriple {
    match projection_lms(kind) {
        Some(m) => LmsTriple::from_array(mat_vec(&m, t.to_array())),
        None => t,
    }
}

enum Transform {
    Linear(Mat3),
    Luminance,
}

/// A profile compiled to a single linear-RGB operation.
pub struct Simulator {
    transform: Transform,
}

impl Simulator {
    pub fn new(profile: &DeficiencyProfile) -> Self {
        let transform = match projection_lms(profile.kind) {
            None => Transform::Luminance,
            Some(p) => {
                let full = mat_mul(&LMS_TO_RGB, &mat_mul(&p, &RGB_TO_LMS));
                let s = profile.severity;
                let mut m = [[0.0; 3]; 3];
                for i in 0..3 {
                    for j in 0..3 {
                        let id = if i == j { 1.0 } else { 0.0 };
                        m[i][j] = (1.0 - s) * id + s * full[i][j];
                    }
                }
                Transform::Linear(m)
            }
        };
        Simulator { transform }
    }

    #[inline]
    pub fn apply_linear(&self, c: LinearRgb) -> LinearRgb {
        match &self.transform {
            Transform::Linear(m) => LinearRgb::from_array(mat_vec(m, c.to_array())),
            Transform::Luminance => {
                let y = c.luminance();
                LinearRgb::new(y, y, y)
            }
        }
    }

    #[inline]
    pub fn apply(&self, p: PixelSrgb) -> PixelSrgb {
        let c = LinearRgb::new(
            decode_channel(p.r),
            decode_channel(p.g),
            decode_channel(p.b),
        );
        let o = self.apply_linear(c);
        PixelSrgb::new(
            encode_channel(o.r),
            encode_channel(o.g),
            encode_channel(o.b),
        )
    }

    pub fn apply_image(&self, img: &ImageBuffer) -> ImageBuffer {
        img.map_pixels(|p| self.apply(p))
    }
}

pub fn simulate_pixel(p: PixelSrgb, prof: &DeficiencyProfile) -> PixelSrgb {
    Simulator::new(prof).apply(p)
}

pub fn simulate_image(img: &ImageBuffer, prof: &DeficiencyProfile) -> ImageBuffer {
    Simulator::new(prof).apply_image(img)
}

/// How far (CIE76) the deficiency moves this color.
pub fn confusion_distance(p: PixelSrgb, prof: &DeficiencyProfile) -> f64 {
    confusion_distance_with(&Simulator::new(prof), p)
}

pub(crate) fn confusion_distance_with(sim: &Simulator, p: PixelSrgb) -> f64 {
    color::delta_e(rgb_to_lab(p), rgb_to_lab(sim.apply(p)))
}

/// Confusion distance of every pixel, row-major.
pub fn confusion_field(img: &ImageBuffer, prof: &DeficiencyProfile) -> Vec<f64> {
    let sim = Simulator::new(prof);
    img.pixels()
        .iter()
        .map(|&p| confusion_distance_with(&sim, p))
        .collect()
}

/// Straight decode, project, encode chain without the precompiled matrix.
/// Used as a cross-check of [`Simulator`].
pub fn simulate_pixel_reference(p: PixelSrgb, prof: &DeficiencyProfile) -> PixelSrgb {
    let lin = srgb_decode(p);
    match prof.kind.dichromat() {
        None => {
            let y = lin.luminance();
            srgb_encode(LinearRgb::new(y, y, y))
        }
        Some(d) => {
            let lms = color::rgb_to_lms(lin);
            let projected = color::lms_to_rgb(project_lms(lms, d));
            srgb_encode(lin.lerp(projected, prof.severity))
        }
    }
}
