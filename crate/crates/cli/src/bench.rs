use std::io::Write;
use std::time::Instant;

use cvd_core::augment::{fuse_pentachromatic, AugmentConfig, BandImage};
use cvd_core::color::{hsv_to_rgb, HsvTriple, ImageBuffer};
use cvd_core::correct::Operator;
use cvd_core::simulate::Simulator;
use cvd_core::spectral::ConeClass;
use cvd_core::{Deficiency, DeficiencyProfile, Error, Result};

use crate::args::BenchArgs;

pub const MIN_ITERATIONS: u32 = 10;

pub const DEFAULT_OPS: &[&str] = &[
    "identity",
    "simulate/protanopia",
    "simulate/deuteranomaly",
    "simulate/monochromacy",
    "red_gray",
    "desaturate",
    "luminance_equalize",
    "passive_filter",
    "blink",
    "edge_enhance",
    "augment",
];

#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub op: String,
    pub width: u32,
    pub height: u32,
    pub iterations: u32,
    pub median_ms: f64,
    pub megapixels_per_s: f64,
}

impl BenchReport {
    /// `bench,<op>,<w>x<h>,<ms>,<mps>`
    pub fn line(&self) -> String {
        format!(
            "bench,{},{}x{},{:.3},{:.2}",
            self.op, self.width, self.height, self.median_ms, self.megapixels_per_s
        )
    }
}

/// Deterministic test frame: hue sweeps along x, value and saturation along y.
pub fn synthetic_frame(width: u32, height: u32) -> Result<ImageBuffer> {
    ImageBuffer::from_fn(width, height, |x, y| {
        let h = 360.0 * x as f64 / width as f64;
        let s = 0.3 + 0.7 * (y % 64) as f64 / 63.0;
        let v = 0.2 + 0.8 * y as f64 / height.max(2) as f64;
        hsv_to_rgb(HsvTriple::new(h, s, v))
    })
}

pub fn parse_size(s: &str) -> Result<(u32, u32)> {
    let bad = || Error::invalid("size", format!("`{s}` is not WIDTHxHEIGHT"));
    let (w, h) = s.split_once(['x', 'X']).ok_or_else(bad)?;
    let w: u32 = w.trim().parse().map_err(|_| bad())?;
    let h: u32 = h.trim().parse().map_err(|_| bad())?;
    if w == 0 || h == 0 {
        return Err(bad());
    }
    Ok((w, h))
}

type Job = Box<dyn Fn(&ImageBuffer) -> Result<ImageBuffer>>;

fn job(op: &str, width: u32, height: u32) -> Result<Job> {
    if op == "identity" {
        return Ok(Box::new(|img| Ok(img.clone())));
    }
    if let Some(kind) = op.strip_prefix("simulate/") {
        let sim = Simulator::new(&DeficiencyProfile::full(kind.parse::<Deficiency>()?));
        return Ok(Box::new(move |img| Ok(sim.apply_image(img))));
    }
    if op == "augment" {
        let ramp = |shift: u32| {
            (0..width * height)
                .map(|i| ((i + shift) % 256) as u8)
                .collect::<Vec<_>>()
        };
        let uv = BandImage::new(ConeClass::Uv, width, height, ramp(0))?;
        let ir = BandImage::new(ConeClass::Ir, width, height, ramp(128))?;
        let cfg = AugmentConfig::default();
        return Ok(Box::new(move |img| {
            fuse_pentachromatic(img, &uv, &ir, &cfg)
        }));
    }
    let operator: Operator = op.parse()?;
    operator.validate()?;
    let prof = DeficiencyProfile::full(Deficiency::Protanopia);
    Ok(Box::new(move |img| operator.apply(img, Some(&prof), 0)))
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        (xs[n / 2 - 1] + xs[n / 2]) / 2.0
    }
}

/// Times each operator on one shared frame. Operators are resolved before
/// anything runs, so a bad name fails fast.
pub fn run_bench(
    ops: &[&str],
    width: u32,
    height: u32,
    iterations: u32,
) -> Result<Vec<BenchReport>> {
    if iterations < MIN_ITERATIONS {
        return Err(Error::invalid(
            "iterations",
            format!("must be at least {MIN_ITERATIONS}, got {iterations}"),
        ));
    }
    let jobs = ops
        .iter()
        .map(|op| job(op, width, height).map(|j| (op.to_string(), j)))
        .collect::<Result<Vec<_>>>()?;
    let frame = synthetic_frame(width, height)?;
    let mut reports = Vec::with_capacity(jobs.len());
    for (op, run) in jobs {
        run(&frame)?;
        let mut times = Vec::with_capacity(iterations as usize);
        for _ in 0..iterations {
            let start = Instant::now();
            let out = run(&frame)?;
            times.push(start.elapsed().as_secs_f64() * 1e3);
            std::hint::black_box(out);
        }
        let median_ms = median(times).max(1e-6);
        reports.push(BenchReport {
            op,
            width,
            height,
            iterations,
            median_ms,
            megapixels_per_s: (width as f64 * height as f64 / 1e6) / (median_ms / 1e3),
        });
    }
    Ok(reports)
}

pub fn bench(args: &BenchArgs, out: &mut dyn Write) -> Result<()> {
    let (w, h) = parse_size(&args.size)?;
    let ops: Vec<&str> = if args.ops.is_empty() {
        DEFAULT_OPS.to_vec()
    } else {
        args.ops.iter().map(String::as_str).collect()
    };
    let reports = run_bench(&ops, w, h, args.iterations)?;
    writeln!(
        out,
        "{:<26} {:>11} {:>6} {:>10} {:>9}",
        "op", "size", "iters", "ms/frame", "MP/s"
    )?;
    for r in &reports {
        writeln!(
            out,
            "{:<26} {:>11} {:>6} {:>10.3} {:>9.1}",
            r.op,
            format!("{}x{}", r.width, r.height),
            r.iterations,
            r.median_ms,
            r.megapixels_per_s
        )?;
    }
    for r in &reports {
        writeln!(out, "{}", r.line())?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        assert_eq!(parse_size("1920x1080").unwrap(), (1920, 1080));
        assert_eq!(parse_size("64X48").unwrap(), (64, 48));
        assert!(parse_size("1920").is_err());
        assert!(parse_size("0x5").is_err());
    }

    #[test]
    fn small_bench_runs_every_default_op() {
        let reports = run_bench(DEFAULT_OPS, 32, 24, 10).unwrap();
        assert_eq!(reports.len(), DEFAULT_OPS.len());
        assert!(reports
            .iter()
            .all(|r| r.median_ms > 0.0 && r.megapixels_per_s > 0.0));
        assert!(reports[0].line().starts_with("bench,identity,32x24,"));
    }

    #[test]
    fn rejects_bad_requests() {
        assert_eq!(
            run_bench(&["identity"], 8, 8, 9).unwrap_err().code(),
            "invalid_parameter"
        );
        assert_eq!(
            run_bench(&["sharpen"], 8, 8, 10).unwrap_err().code(),
            "unknown_operator"
        );
        assert_eq!(
            run_bench(&["simulate/x"], 8, 8, 10).unwrap_err().code(),
            "unknown_deficiency"
        );
    }
}
