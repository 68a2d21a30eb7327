use std::io::{self, Write};
use std::net::SocketAddr;
use std::path::Path;

use serde_json::json;

use cvd_core::augment::{AugmentConfig, BandImage};
use cvd_core::color::{ImageBuffer, PixelSrgb};
use cvd_core::compose::{compose, Layout, DEFAULT_GUTTER_PX};
use cvd_core::correct::CorrectionRecipe;
use cvd_core::io::{read_png, write_png};
use cvd_core::pipeline::{process, AugmentInputs, ProcessParams};
use cvd_core::plates::{generate_plate, legibility, legibility_of, masks_from_image, PlateSpec};
use cvd_core::spectral::{render_rainbow, ConeClass, RainbowSpec};
use cvd_core::{Deficiency, DeficiencyProfile, Error, Result};

use crate::args::{ComposeArgs, FrameArgs, PlateArgs, RainbowArgs, ServeArgs};
use crate::config::FileConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrameMode {
    Simulate,
    Correct,
    Augment,
}

/// Fails early when the output cannot be created, before any pixel work.
pub fn check_output(path: &Path) -> Result<()> {
    let parent = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    if !parent.is_dir() {
        return Err(Error::Io(io::Error::new(
            io::ErrorKind::NotFound,
            format!("output directory `{}` does not exist", parent.display()),
        )));
    }
    if path.is_dir() {
        return Err(Error::Io(io::Error::new(
            io::ErrorKind::IsADirectory,
            format!("output `{}` is a directory", path.display()),
        )));
    }
    Ok(())
}

fn parse_color(field: &str, s: &str) -> Result<PixelSrgb> {
    PixelSrgb::parse(s)
        .ok_or_else(|| Error::invalid(field, format!("`{s}` is not a color (#rrggbb or r/g/b)")))
}

fn read_recipe(path: &Path) -> Result<CorrectionRecipe> {
    let text = std::fs::read_to_string(path)?;
    if text.trim_start().starts_with('[') {
        CorrectionRecipe::from_json(&text)
    } else {
        CorrectionRecipe::parse_text(&text.replace('\n', ","))
    }
}

/// Resolves flags over config-file values into pipeline parameters. Only
/// cheap checks happen here; band images are read by the caller.
pub fn frame_params(args: &FrameArgs, cfg: &FileConfig, mode: FrameMode) -> Result<ProcessParams> {
    let kind = args.kind.as_ref().or(cfg.kind.as_ref());
    let severity = args.severity.or(cfg.severity);
    let profile = match kind {
        Some(k) => Some(DeficiencyProfile::new(
            k.parse::<Deficiency>()?,
            severity.unwrap_or(1.0),
        )?),
        None if args.severity.is_some() => return Err(Error::invalid("severity", "needs --kind")),
        None => None,
    };
    let flag_recipe = !args.ops.is_empty() || args.recipe_file.is_some();
    let recipe = if flag_recipe {
        let mut steps = match &args.recipe_file {
            Some(p) => read_recipe(p)?.steps,
            None => Vec::new(),
        };
        steps.extend(CorrectionRecipe::parse_text(&args.ops.join(","))?.steps);
        CorrectionRecipe::new(steps)
    } else if mode == FrameMode::Correct {
        cfg.recipe.clone().unwrap_or_default()
    } else {
        CorrectionRecipe::default()
    };
    let has_bands = args.uv.is_some() || args.ir.is_some();
    match mode {
        FrameMode::Simulate => {
            if profile.is_none() {
                return Err(Error::MissingProfile("simulate".into()));
            }
            if flag_recipe || has_bands {
                return Err(Error::invalid(
                    "op",
                    "simulate takes no corrections; use `correct` or `augment`",
                ));
            }
        }
        FrameMode::Augment if !has_bands => {
            return Err(Error::invalid("uv", "augment needs --uv and/or --ir"));
        }
        _ => {}
    }
    let layout = match args.layout.as_ref().or(cfg.layout.as_ref()) {
        Some(l) => l.parse::<Layout>()?,
        None => Layout::Single,
    };
    let mut augment = None;
    if has_bands {
        let mut config = AugmentConfig::default();
        if let Some(mix) = args.mix.or(cfg.mix) {
            config.mix = mix;
        }
        if let Some(c) = args.uv_color.as_ref().or(cfg.uv_color.as_ref()) {
            config.uv_display_color = parse_color("uv_color", c)?;
        }
        if let Some(c) = args.ir_color.as_ref().or(cfg.ir_color.as_ref()) {
            config.ir_display_color = parse_color("ir_color", c)?;
        }
        config.validate()?;
        augment = Some(AugmentInputs {
            uv: None,
            ir: None,
            config,
        });
    }
    Ok(ProcessParams {
        profile,
        recipe,
        layout,
        gutter_px: args.gutter.or(cfg.gutter).unwrap_or(DEFAULT_GUTTER_PX),
        t_ms: args.t_ms.or(cfg.t_ms).unwrap_or(0),
        augment,
    })
}

pub fn frame(
    args: &FrameArgs,
    cfg: &FileConfig,
    mode: FrameMode,
    out: &mut dyn Write,
) -> Result<()> {
    let mut params = frame_params(args, cfg, mode)?;
    check_output(&args.output)?;
    let img = read_png(&args.input)?;
    if let Some(aug) = &mut params.augment {
        if let Some(p) = &args.uv {
            aug.uv = Some(BandImage::from_image(ConeClass::Uv, &read_png(p)?)?);
        }
        if let Some(p) = &args.ir {
            aug.ir = Some(BandImage::from_image(ConeClass::Ir, &read_png(p)?)?);
        }
    }
    let mask = args.mask.as_ref().map(read_png).transpose()?;
    let result = process(&img, &params)?;
    write_png(&args.output, &result)?;
    if let Some(mask) = mask {
        let (fig, ground) = masks_from_image(&mask);
        let primary = process(
            &img,
            &ProcessParams {
                layout: Layout::Single,
                ..params
            },
        )?;
        let report = legibility_of(&primary, &fig, &ground)?;
        writeln!(
            out,
            "{}",
            serde_json::to_string(&report).expect("report serializes")
        )?;
    }
    Ok(())
}

pub fn rainbow(args: &RainbowArgs) -> Result<()> {
    let spec = RainbowSpec {
        width: args.width,
        height: args.height,
        lambda_min_nm: args.min_nm,
        lambda_max_nm: args.max_nm,
    };
    spec.validate()?;
    check_output(&args.output)?;
    write_png(&args.output, &render_rainbow(&spec)?)
}

pub fn plate(args: &PlateArgs, out: &mut dyn Write) -> Result<()> {
    let mut spec = PlateSpec::preset(&args.preset, args.digit, args.seed)?;
    if let Some(s) = args.size {
        spec.size_px = s;
    }
    if let Some(r) = args.radius_min {
        spec.dot_radius_min = r;
    }
    if let Some(r) = args.radius_max {
        spec.dot_radius_max = r;
    }
    spec.validate()?;
    check_output(&args.output)?;
    if let Some(m) = &args.mask_out {
        check_output(m)?;
    }
    let plate = generate_plate(&spec)?;
    write_png(&args.output, &plate.image)?;
    if let Some(m) = &args.mask_out {
        write_png(m, &plate.mask_image())?;
    }
    let report = legibility(&plate, |i| i.clone())?;
    let line = json!({
        "digit": spec.digit,
        "preset": args.preset,
        "seed": spec.seed,
        "size_px": spec.size_px,
        "dots": plate.dots.len(),
        "coverage": plate.coverage,
        "score": report.score,
        "verdict": report.verdict,
        "legible": report.legible,
    });
    writeln!(out, "{line}")?;
    Ok(())
}

pub fn compose_cmd(args: &ComposeArgs, cfg: &FileConfig) -> Result<()> {
    check_output(&args.output)?;
    let images = args
        .inputs
        .iter()
        .map(read_png)
        .collect::<Result<Vec<ImageBuffer>>>()?;
    let gutter = args.gutter.or(cfg.gutter).unwrap_or(DEFAULT_GUTTER_PX);
    write_png(&args.output, &compose(&images, gutter)?)
}

pub fn serve(args: &ServeArgs) -> Result<()> {
    let addr: SocketAddr = args
        .addr
        .parse()
        .map_err(|_| Error::invalid("addr", format!("`{}` is not a socket address", args.addr)))?;
    cvd_service::run(addr)?;
    Ok(())
}
