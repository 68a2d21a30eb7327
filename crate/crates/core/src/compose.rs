//! Horizontal pane layout.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::color::{ImageBuffer, PixelSrgb};
use crate::{Error, Result};

pub const GUTTER_COLOR: PixelSrgb = PixelSrgb::new(18, 18, 18);
pub const DEFAULT_GUTTER_PX: u32 = 8;
pub const MAX_GUTTER_PX: u32 = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Layout {
    #[default]
    Single,
    SideBySide,
    Triptych,
}

impl Layout {
    pub const ALL: [Layout; 3] = [Layout::Single, Layout::SideBySide, Layout::Triptych];

    pub fn as_str(self) -> &'static str {
        match self {
            Layout::Single => "single",
            Layout::SideBySide => "side_by_side",
            Layout::Triptych => "triptych",
        }
    }

    pub fn panes(self) -> usize {
        match self {
            Layout::Single => 1,
            Layout::SideBySide => 2,
            Layout::Triptych => 3,
        }
    }
}

impl fmt::Display for Layout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Layout {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().to_ascii_lowercase().replace('-', "_");
        Layout::ALL
            .into_iter()
            .find(|l| l.as_str() == norm)
            .ok_or_else(|| Error::UnknownLayout(s.to_string()))
    }
}

/// Nearest-neighbor resize to `height`, keeping aspect ratio:
/// `src_x = floor(x * w / new_w)`, `src_y = floor(y * h / height)`.
pub fn resize_to_height(img: &ImageBuffer, height: u32) -> ImageBuffer {
    if img.height() == height {
        return img.clone();
    }
    let (w, h) = img.dimensions();
    let new_w = ((w as u64 * height as u64 + h as u64 / 2) / h as u64).max(1) as u32;
    ImageBuffer::from_fn(new_w, height, |x, y| {
        let sx = (x as u64 * w as u64 / new_w as u64) as u32;
        let sy = (y as u64 * h as u64 / height as u64) as u32;
        img.get(sx, sy)
    })
    .expect("positive dimensions")
}

/// Concatenates panes left to right with `gutter_px` columns of
/// [`GUTTER_COLOR`] between them. Panes taller or shorter than the first are
/// resized to its height.
pub fn compose(images: &[ImageBuffer], gutter_px: u32) -> Result<ImageBuffer> {
    let first = images.first().ok_or(Error::EmptyInput)?;
    if images.len() == 1 {
        return Ok(first.clone());
    }
    let height = first.height();
    let panes: Vec<ImageBuffer> = images.iter().map(|i| resize_to_height(i, height)).collect();
    let width: u32 =
        panes.iter().map(|p| p.width()).sum::<u32>() + gutter_px * (panes.len() as u32 - 1);
    let mut data = Vec::with_capacity(width as usize * height as usize);
    for y in 0..height {
        for (i, pane) in panes.iter().enumerate() {
            if i > 0 {
                data.extend(std::iter::repeat_n(GUTTER_COLOR, gutter_px as usize));
            }
            data.extend_from_slice(pane.row(y));
        }
    }
    ImageBuffer::new(width, height, data)
}

/// Extracts pane `index` from a composition of `count` equal-width panes.
pub fn split_pane(
    composed: &ImageBuffer,
    count: u32,
    gutter_px: u32,
    index: u32,
) -> Result<ImageBuffer> {
    if count == 0 || index >= count {
        return Err(Error::invalid(
            "pane",
            format!("index {index} out of {count}"),
        ));
    }
    let total = composed.width().checked_sub(gutter_px * (count - 1));
    let pane_w = match total {
        Some(t) if t % count == 0 && t > 0 => t / count,
        _ => {
            return Err(Error::invalid(
                "pane",
                "width is not a whole number of panes",
            ))
        }
    };
    composed.crop(index * (pane_w + gutter_px), 0, pane_w, composed.height())
}
