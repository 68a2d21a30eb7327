//! Color-vision deficiency toolkit.
//!
//! The crate is organised as a small pixel pipeline:
//!
//! - [`color`]: sRGB, linear-light, LMS, HSV and CIELAB representations.
//! - [`spectral`]: cone sensitivity curves and rainbow synthesis.
//! - [`simulate`]: dichromat / anomalous trichromat / monochromat rendering.
//! - [`correct`]: assistance operators and the recipe that chains them.
//! - [`augment`]: UV / IR band fusion.
//! - [`plates`]: synthetic pseudoisochromatic plates and legibility scoring.
//! - [`compose`] and [`pipeline`]: pane layout and the request-level entry
//!   point shared by the CLI and the HTTP service.
//!
//! All per-pixel math is done in `f64`; values are quantized only when
//! encoding back to 8-bit sRGB.

// Parameter checks are written `!(x > 0.0)` so NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod augment;
pub mod color;
pub mod compose;
pub mod correct;
mod error;
pub mod io;
pub mod pipeline;
pub mod plates;
pub mod simulate;
pub mod spectral;

pub use color::{HsvTriple, ImageBuffer, LabTriple, LinearRgb, LmsTriple, PixelSrgb};
pub use error::{Error, ErrorKind, Result};
pub use simulate::{Deficiency, DeficiencyProfile};
