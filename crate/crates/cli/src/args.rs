use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "cvd",
    version,
    about = "Color-vision deficiency simulation and correction"
)]
pub struct Cli {
    /// Profile/recipe defaults, as `key = value` lines or a JSON object.
    /// Command-line flags take precedence.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Render a visible-spectrum strip, red at the left.
    Rainbow(RainbowArgs),
    /// Show an image as seen with a color-vision deficiency.
    Simulate(FrameArgs),
    /// Apply a correction recipe.
    Correct(FrameArgs),
    /// Generate a pseudoisochromatic test plate.
    Plate(PlateArgs),
    /// Fuse UV and/or IR band images into a visible image.
    Augment(FrameArgs),
    /// Place images side by side.
    Compose(ComposeArgs),
    /// Time operators on a synthetic frame.
    Bench(BenchArgs),
    /// Run the HTTP service.
    Serve(ServeArgs),
}

#[derive(Debug, Args)]
pub struct RainbowArgs {
    #[arg(long, default_value_t = 750)]
    pub width: u32,
    #[arg(long, default_value_t = 100)]
    pub height: u32,
    #[arg(long, default_value_t = 380.0)]
    pub min_nm: f64,
    #[arg(long, default_value_t = 750.0)]
    pub max_nm: f64,
    #[arg(short, long)]
    pub output: PathBuf,
}

/// Shared by `simulate`, `correct` and `augment`; all three run the same
/// frame pipeline.
#[derive(Debug, Args)]
pub struct FrameArgs {
    #[arg(short, long)]
    pub input: PathBuf,
    #[arg(short, long)]
    pub output: PathBuf,
    /// Deficiency kind, e.g. `protanopia` or `deuteranomaly`.
    #[arg(short, long)]
    pub kind: Option<String>,
    /// Severity in [0, 1]; only meaningful for the anomalous kinds.
    #[arg(short, long)]
    pub severity: Option<f64>,
    /// Correction step in text form, e.g. `passive_filter:attenuation=0.3`.
    /// Repeatable; steps run in the order given.
    #[arg(long = "op", value_name = "STEP")]
    pub ops: Vec<String>,
    /// Recipe as JSON (`[{"op": ..., "params": {...}}]`) or text.
    #[arg(long, value_name = "FILE")]
    pub recipe_file: Option<PathBuf>,
    /// `single`, `side_by_side` or `triptych`.
    #[arg(long)]
    pub layout: Option<String>,
    #[arg(long)]
    pub gutter: Option<u32>,
    /// Clock for the blink phase, in milliseconds.
    #[arg(long)]
    pub t_ms: Option<u64>,
    /// UV band image; intensity is its red channel.
    #[arg(long, value_name = "PNG")]
    pub uv: Option<PathBuf>,
    /// IR band image; intensity is its red channel.
    #[arg(long, value_name = "PNG")]
    pub ir: Option<PathBuf>,
    #[arg(long)]
    pub mix: Option<f64>,
    #[arg(long)]
    pub uv_color: Option<String>,
    #[arg(long)]
    pub ir_color: Option<String>,
    /// Plate mask (from `plate --mask-out`); prints a legibility report for
    /// the primary pane.
    #[arg(long, value_name = "PNG")]
    pub mask: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PlateArgs {
    #[arg(long)]
    pub digit: u8,
    #[arg(long, default_value = "protan")]
    pub preset: String,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long)]
    pub size: Option<u32>,
    #[arg(long)]
    pub radius_min: Option<f64>,
    #[arg(long)]
    pub radius_max: Option<f64>,
    #[arg(short, long)]
    pub output: PathBuf,
    /// Figure/ground mask: 255 figure, 128 ground, 0 background.
    #[arg(long, value_name = "PNG")]
    pub mask_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ComposeArgs {
    /// Panes, left to right.
    #[arg(short, long = "input", required = true)]
    pub inputs: Vec<PathBuf>,
    #[arg(long)]
    pub gutter: Option<u32>,
    #[arg(short, long)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Operator to time, e.g. `identity`, `simulate/protanopia`, `red_gray`,
    /// `augment`. Repeatable; defaults to all.
    #[arg(long = "op", value_name = "OP")]
    pub ops: Vec<String>,
    #[arg(long, default_value = "1920x1080")]
    pub size: String,
    #[arg(long, default_value_t = 10)]
    pub iterations: u32,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    /// Listen address; use `0.0.0.0:PORT` to accept remote clients.
    #[arg(long, default_value = cvd_service::DEFAULT_ADDR)]
    pub addr: String,
}
