//! One processed frame: the single entry point behind both the CLI and the
//! HTTP service, so that identical parameters give identical bytes.
//!
//! Panes:
//! - original: the input as given;
//! - simulated: the input as seen under the profile (needs a profile);
//! - corrected: band fusion (UV then IR) followed by the recipe.
//!
//! `single` shows the corrected pane when any correction is requested, else
//! the simulated pane when a profile is given, else the original.
//! `side_by_side` shows the original next to that pane, and `triptych`
//! shows original, simulated and corrected; without a profile the simulated
//! pane is the original.

use crate::augment::{fuse_band, AugmentConfig, BandImage};
use crate::color::ImageBuffer;
use crate::compose::{compose, Layout, DEFAULT_GUTTER_PX, MAX_GUTTER_PX};
use crate::correct::{apply_recipe, CorrectionRecipe};
use crate::simulate::{simulate_image, DeficiencyProfile};
use crate::spectral::ConeClass;
use crate::{Error, Result};

#[derive(Debug, Clone, Default)]
pub struct AugmentInputs {
    pub uv: Option<BandImage>,
    pub ir: Option<BandImage>,
    pub config: AugmentConfig,
}

#[derive(Debug, Clone)]
pub struct ProcessParams {
    pub profile: Option<DeficiencyProfile>,
    pub recipe: CorrectionRecipe,
    pub layout: Layout,
    pub gutter_px: u32,
    pub t_ms: u64,
    pub augment: Option<AugmentInputs>,
}

impl Default for ProcessParams {
    fn default() -> Self {
        ProcessParams {
            profile: None,
            recipe: CorrectionRecipe::default(),
            layout: Layout::Single,
            gutter_px: DEFAULT_GUTTER_PX,
            t_ms: 0,
            augment: None,
        }
    }
}

impl ProcessParams {
    fn has_correction(&self) -> bool {
        !self.recipe.is_empty() || self.augment.is_some()
    }

    /// Checks everything that can be checked before touching pixels.
    pub fn validate(&self, width: u32, height: u32) -> Result<()> {
        if self.gutter_px > MAX_GUTTER_PX {
            return Err(Error::invalid(
                "gutter_px",
                format!("must be at most {MAX_GUTTER_PX}, got {}", self.gutter_px),
            ));
        }
        if self.profile.is_none() {
            if let Some(op) = self.recipe.steps.iter().find(|op| op.needs_profile()) {
                return Err(Error::MissingProfile(op.name().to_string()));
            }
        }
        for op in &self.recipe.steps {
            op.validate()?;
        }
        if let Some(aug) = &self.augment {
            aug.config.validate()?;
            for (band, expected) in [(&aug.uv, ConeClass::Uv), (&aug.ir, ConeClass::Ir)] {
                let Some(band) = band else { continue };
                if band.band() != expected {
                    return Err(Error::invalid(
                        "bands",
                        format!("expected a {expected} band, got {}", band.band()),
                    ));
                }
                let (bw, bh) = band.dimensions();
                if (bw, bh) != (width, height) {
                    return Err(Error::DimensionMismatch {
                        what: "band image",
                        expected_w: width,
                        expected_h: height,
                        actual_w: bw,
                        actual_h: bh,
                    });
                }
            }
        }
        Ok(())
    }

    pub fn corrected(&self, img: &ImageBuffer) -> Result<ImageBuffer> {
        let mut out = img.clone();
        if let Some(aug) = &self.augment {
            for band in [&aug.uv, &aug.ir].into_iter().flatten() {
                out = fuse_band(&out, band, &aug.config)?;
            }
        }
        apply_recipe(&out, &self.recipe, self.profile.as_ref(), self.t_ms)
    }

    pub fn simulated(&self, img: &ImageBuffer) -> Option<ImageBuffer> {
        self.profile.as_ref().map(|p| simulate_image(img, p))
    }
}

/// Runs the full frame pipeline and returns the composed output.
pub fn process(img: &ImageBuffer, params: &ProcessParams) -> Result<ImageBuffer> {
    params.validate(img.width(), img.height())?;
    let primary = || -> Result<ImageBuffer> {
        if params.has_correction() {
            params.corrected(img)
        } else if let Some(sim) = params.simulated(img) {
            Ok(sim)
        } else {
            Ok(img.clone())
        }
    };
    match params.layout {
        Layout::Single => primary(),
        Layout::SideBySide => compose(&[img.clone(), primary()?], params.gutter_px),
        Layout::Triptych => {
            let sim = params.simulated(img).unwrap_or_else(|| img.clone());
            compose(
                &[img.clone(), sim, params.corrected(img)?],
                params.gutter_px,
            )
        }
    }
}
