//! Synthetic pseudoisochromatic plates and a legibility score.
//!
//! A plate is a disc of non-overlapping dots. Dots whose center falls inside
//! a digit glyph draw their color from the figure palette, the rest from the
//! ground palette. Legibility is the CIE76 distance between the mean Lab
//! color of figure pixels and the mean Lab color of ground pixels, measured
//! after an arbitrary image transform (a deficiency simulation, a
//! correction, ...).

mod glyph;
mod rng;

pub use glyph::Glyph;
pub use rng::{Lcg64, LCG_INCREMENT, LCG_MULTIPLIER};

use serde::{Deserialize, Serialize};

use crate::color::{delta_e, rgb_to_lab, ImageBuffer, LabTriple, PixelSrgb};
use crate::correct::RegionMask;
use crate::{Error, Result};

/// Score at or above which the digit counts as legible.
pub const LEGIBLE_THRESHOLD: f64 = 10.0;
/// Score below which the digit counts as invisible.
pub const INVISIBLE_THRESHOLD: f64 = 5.0;
/// Minimum fraction of the plate disc covered by dots.
pub const MIN_COVERAGE: f64 = 0.60;

pub const BACKGROUND: PixelSrgb = PixelSrgb::WHITE;

/// Reddish figure colors on the protan confusion lines of [`PROTAN_GROUND`]:
/// each is the matching ground color moved along the L-cone axis only.
pub const PROTAN_FIGURE: [PixelSrgb; 3] = [
    PixelSrgb::new(227, 113, 62),
    PixelSrgb::new(224, 108, 59),
    PixelSrgb::new(230, 119, 66),
];

/// Olive ground colors.
pub const PROTAN_GROUND: [PixelSrgb; 3] = [
    PixelSrgb::new(150, 140, 60),
    PixelSrgb::new(145, 136, 57),
    PixelSrgb::new(155, 144, 64),
];

const GAP_PX: f64 = 0.5;
const RADIUS_STEP: f64 = 0.8;
const ATTEMPTS_PER_SLOT: f64 = 8.0;
const MARGIN_PX: f64 = 2.0;
const GLYPH_HEIGHT_FRACTION: f64 = 0.62;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlateSpec {
    pub digit: u8,
    pub size_px: u32,
    pub seed: u64,
    pub figure_palette: Vec<PixelSrgb>,
    pub ground_palette: Vec<PixelSrgb>,
    pub dot_radius_min: f64,
    pub dot_radius_max: f64,
}

impl PlateSpec {
    /// Named preset: figure and ground colors a protanope cannot separate.
    pub fn protan(digit: u8, seed: u64) -> Self {
        PlateSpec {
            digit,
            size_px: 512,
            seed,
            figure_palette: PROTAN_FIGURE.to_vec(),
            ground_palette: PROTAN_GROUND.to_vec(),
            dot_radius_min: 3.0,
            dot_radius_max: 11.0,
        }
    }

    pub fn preset(name: &str, digit: u8, seed: u64) -> Result<Self> {
        match name {
            "protan" => Ok(Self::protan(digit, seed)),
            _ => Err(Error::invalid(
                "preset",
                format!("unknown plate preset `{name}`"),
            )),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.digit > 9 {
            return Err(Error::invalid(
                "digit",
                format!("must be 0-9, got {}", self.digit),
            ));
        }
        if self.size_px < 64 {
            return Err(Error::invalid(
                "size_px",
                format!("must be at least 64, got {}", self.size_px),
            ));
        }
        if self.figure_palette.is_empty() {
            return Err(Error::invalid("figure_palette", "must not be empty"));
        }
        if self.ground_palette.is_empty() {
            return Err(Error::invalid("ground_palette", "must not be empty"));
        }
        if !(self.dot_radius_min >= 2.0) {
            return Err(Error::invalid("dot_radius_min", "must be at least 2 px"));
        }
        if !(self.dot_radius_max >= self.dot_radius_min) || !self.dot_radius_max.is_finite() {
            return Err(Error::invalid(
                "dot_radius_max",
                "must be at least dot_radius_min",
            ));
        }
        if self.dot_radius_max * 4.0 > self.size_px as f64 {
            return Err(Error::invalid("dot_radius_max", "too large for the plate"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Dot {
    pub x: f64,
    pub y: f64,
    pub radius: f64,
    pub color: PixelSrgb,
    pub figure: bool,
}

impl Dot {
    pub fn overlaps(&self, other: &Dot) -> bool {
        let (dx, dy) = (self.x - other.x, self.y - other.y);
        (dx * dx + dy * dy).sqrt() < self.radius + other.radius
    }
}

#[derive(Debug, Clone)]
pub struct Plate {
    pub image: ImageBuffer,
    pub figure_mask: RegionMask,
    /// Pixels of ground dots; background between dots is in neither mask.
    pub ground_mask: RegionMask,
    pub dots: Vec<Dot>,
    /// Total dot area over plate disc area.
    pub coverage: f64,
}

impl Plate {
    /// Gray mask image: figure 255, ground 128, background 0.
    pub fn mask_image(&self) -> ImageBuffer {
        let (w, h) = self.image.dimensions();
        ImageBuffer::from_fn(w, h, |x, y| {
            if self.figure_mask.get(x, y) {
                PixelSrgb::gray(255)
            } else if self.ground_mask.get(x, y) {
                PixelSrgb::gray(128)
            } else {
                PixelSrgb::BLACK
            }
        })
        .expect("plate dimensions are valid")
    }
}

/// Figure and ground masks recovered from a [`Plate::mask_image`].
pub fn masks_from_image(mask: &ImageBuffer) -> (RegionMask, RegionMask) {
    let (w, h) = mask.dimensions();
    let fig = mask.pixels().iter().map(|p| p.r >= 192).collect();
    let ground = mask
        .pixels()
        .iter()
        .map(|p| (64..192).contains(&p.r))
        .collect();
    (
        RegionMask::new(w, h, fig).expect("sizes match"),
        RegionMask::new(w, h, ground).expect("sizes match"),
    )
}

struct Grid {
    cell: f64,
    cols: usize,
    cells: Vec<Vec<usize>>,
}

impl Grid {
    fn new(size: f64, cell: f64) -> Self {
        let cols = (size / cell).ceil() as usize + 1;
        Grid {
            cell,
            cols,
            cells: vec![Vec::new(); cols * cols],
        }
    }

    fn key(&self, x: f64, y: f64) -> (usize, usize) {
        let c = ((x / self.cell).floor().max(0.0) as usize).min(self.cols - 1);
        let r = ((y / self.cell).floor().max(0.0) as usize).min(self.cols - 1);
        (c, r)
    }

    fn insert(&mut self, x: f64, y: f64, idx: usize) {
        let (c, r) = self.key(x, y);
        self.cells[r * self.cols + c].push(idx);
    }

    fn neighbours(&self, x: f64, y: f64) -> impl Iterator<Item = usize> + '_ {
        let (c, r) = self.key(x, y);
        let rows = r.saturating_sub(1)..=(r + 1).min(self.cols - 1);
        rows.flat_map(move |rr| {
            let cols = c.saturating_sub(1)..=(c + 1).min(self.cols - 1);
            cols.flat_map(move |cc| self.cells[rr * self.cols + cc].iter().copied())
        })
    }
}

/// Random sequential packing, largest radius first, shrinking the radius
/// geometrically down to the minimum so that small dots fill the gaps.
pub fn generate_plate(spec: &PlateSpec) -> Result<Plate> {
    spec.validate()?;
    let size = spec.size_px as f64;
    let center = size / 2.0;
    let plate_r = size / 2.0 - MARGIN_PX;
    let glyph = Glyph::centered(
        spec.digit,
        center,
        center,
        2.0 * plate_r * GLYPH_HEIGHT_FRACTION,
    );

    let mut rng = Lcg64::new(spec.seed);
    let mut grid = Grid::new(size, 2.0 * spec.dot_radius_max + GAP_PX);
    let mut dots: Vec<Dot> = Vec::new();

    let mut radius = spec.dot_radius_max;
    loop {
        let reach = plate_r - radius;
        let slots = (plate_r * plate_r) / (radius * radius);
        let attempts = (slots * ATTEMPTS_PER_SLOT).ceil() as usize;
        for _ in 0..attempts {
            let x = center + (2.0 * rng.next_f64() - 1.0) * reach;
            let y = center + (2.0 * rng.next_f64() - 1.0) * reach;
            let (dx, dy) = (x - center, y - center);
            if dx * dx + dy * dy > reach * reach {
                continue;
            }
            let clear = grid.neighbours(x, y).all(|j| {
                let o = &dots[j];
                let (ex, ey) = (x - o.x, y - o.y);
                (ex * ex + ey * ey).sqrt() >= radius + o.radius + GAP_PX
            });
            if !clear {
                continue;
            }
            let figure = glyph.contains(x, y);
            let palette = if figure {
                &spec.figure_palette
            } else {
                &spec.ground_palette
            };
            let color = palette[rng.next_index(palette.len())];
            grid.insert(x, y, dots.len());
            dots.push(Dot {
                x,
                y,
                radius,
                color,
                figure,
            });
        }
        if radius <= spec.dot_radius_min {
            break;
        }
        radius = (radius * RADIUS_STEP).max(spec.dot_radius_min);
    }

    let dot_area: f64 = dots.iter().map(|d| d.radius * d.radius).sum();
    let coverage = dot_area / (plate_r * plate_r);
    if coverage < MIN_COVERAGE {
        return Err(Error::Coverage {
            min: spec.dot_radius_min,
            max: spec.dot_radius_max,
            achieved: 100.0 * coverage,
            required: 100.0 * MIN_COVERAGE,
        });
    }

    let (w, h) = (spec.size_px, spec.size_px);
    let mut pixels = vec![BACKGROUND; w as usize * h as usize];
    let mut figure_bits = vec![false; pixels.len()];
    let mut ground_bits = vec![false; pixels.len()];
    for d in &dots {
        let x0 = (d.x - d.radius).floor().max(0.0) as u32;
        let x1 = ((d.x + d.radius).ceil() as u32).min(w - 1);
        let y0 = (d.y - d.radius).floor().max(0.0) as u32;
        let y1 = ((d.y + d.radius).ceil() as u32).min(h - 1);
        for py in y0..=y1 {
            for px in x0..=x1 {
                let (ex, ey) = (px as f64 + 0.5 - d.x, py as f64 + 0.5 - d.y);
                if ex * ex + ey * ey < d.radius * d.radius {
                    let i = py as usize * w as usize + px as usize;
                    pixels[i] = d.color;
                    if d.figure {
                        figure_bits[i] = true;
                    } else {
                        ground_bits[i] = true;
                    }
                }
            }
        }
    }

    Ok(Plate {
        image: ImageBuffer::new(w, h, pixels)?,
        figure_mask: RegionMask::new(w, h, figure_bits)?,
        ground_mask: RegionMask::new(w, h, ground_bits)?,
        dots,
        coverage,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Legible,
    Indeterminate,
    Invisible,
}

impl Verdict {
    pub fn from_score(score: f64) -> Self {
        if score >= LEGIBLE_THRESHOLD {
            Verdict::Legible
        } else if score < INVISIBLE_THRESHOLD {
            Verdict::Invisible
        } else {
            Verdict::Indeterminate
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Legible => "legible",
            Verdict::Indeterminate => "indeterminate",
            Verdict::Invisible => "invisible",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LegibilityReport {
    pub score: f64,
    pub verdict: Verdict,
    pub legible: bool,
}

impl LegibilityReport {
    pub fn from_score(score: f64) -> Self {
        let verdict = Verdict::from_score(score);
        LegibilityReport {
            score,
            verdict,
            legible: verdict == Verdict::Legible,
        }
    }
}

pub fn mean_lab<'a>(pixels: impl IntoIterator<Item = &'a PixelSrgb>) -> Option<LabTriple> {
    let (mut l, mut a, mut b, mut n) = (0.0, 0.0, 0.0, 0usize);
    for &p in pixels {
        let lab = rgb_to_lab(p);
        l += lab.l_star;
        a += lab.a_star;
        b += lab.b_star;
        n += 1;
    }
    (n > 0).then(|| LabTriple::new(l / n as f64, a / n as f64, b / n as f64))
}

/// Scores an image against figure/ground masks.
pub fn legibility_of(
    img: &ImageBuffer,
    figure: &RegionMask,
    ground: &RegionMask,
) -> Result<LegibilityReport> {
    for m in [figure, ground] {
        if m.dimensions() != img.dimensions() {
            return Err(Error::DimensionMismatch {
                what: "plate mask",
                expected_w: img.width(),
                expected_h: img.height(),
                actual_w: m.dimensions().0,
                actual_h: m.dimensions().1,
            });
        }
    }
    let pick = |mask: &RegionMask| {
        img.pixels()
            .iter()
            .zip(mask.bits())
            .filter_map(|(p, &on)| on.then_some(p))
            .collect::<Vec<_>>()
    };
    let fig =
        mean_lab(pick(figure)).ok_or_else(|| Error::invalid("mask", "figure mask is empty"))?;
    let gnd =
        mean_lab(pick(ground)).ok_or_else(|| Error::invalid("mask", "ground mask is empty"))?;
    Ok(LegibilityReport::from_score(delta_e(fig, gnd)))
}

/// Applies `transform` to the plate image and scores the result.
pub fn legibility(
    plate: &Plate,
    transform: impl FnOnce(&ImageBuffer) -> ImageBuffer,
) -> Result<LegibilityReport> {
    let seen = transform(&plate.image);
    legibility_of(&seen, &plate.figure_mask, &plate.ground_mask)
}
