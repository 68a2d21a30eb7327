//! Transport-independent request handling.

use std::time::Instant;

use base64::engine::general_purpose::STANDARD;
use base64::Engine;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use cvd_core::augment::{AugmentConfig, BandImage};
use cvd_core::compose::{Layout, DEFAULT_GUTTER_PX, GUTTER_COLOR, MAX_GUTTER_PX};
use cvd_core::correct::{CorrectionRecipe, RecipeStep, OPERATORS};
use cvd_core::io::{decode_png, encode_png};
use cvd_core::pipeline::{process, AugmentInputs, ProcessParams};
use cvd_core::spectral::{ConeClass, SpectralResponse};
use cvd_core::{Deficiency, DeficiencyProfile, ErrorKind};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ProfileRequest {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub severity: Option<f64>,
}

/// Either the JSON step list or the comma-separated text form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RecipeField {
    Text(String),
    Steps(Vec<RecipeStep>),
}

impl Default for RecipeField {
    fn default() -> Self {
        RecipeField::Steps(Vec::new())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BandsRequest {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub uv: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ir: Option<String>,
}

/// Body of `POST /process`. Images are base64 PNG, optionally as a
/// `data:` URL.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProcessRequest {
    pub image: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile: Option<ProfileRequest>,
    #[serde(default)]
    pub recipe: RecipeField,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub layout: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gutter_px: Option<u32>,
    #[serde(default)]
    pub t_ms: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bands: Option<BandsRequest>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub augment: Option<AugmentConfig>,
}

impl ProcessRequest {
    pub fn new(png: &[u8]) -> Self {
        ProcessRequest {
            image: STANDARD.encode(png),
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProcessResponse {
    pub image: String,
    pub timing_ms: f64,
    pub applied: Value,
}

impl ProcessResponse {
    pub fn png(&self) -> Result<Vec<u8>, ApiError> {
        decode_b64("image", &self.image)
    }
}

/// Structured failure. `status` is the HTTP status to report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApiError {
    #[serde(skip)]
    pub status: u16,
    pub code: String,
    pub message: String,
    pub field: Option<String>,
}

impl ApiError {
    pub fn malformed(message: impl Into<String>) -> Self {
        ApiError {
            status: 400,
            code: "malformed_request".into(),
            message: message.into(),
            field: None,
        }
    }

    pub fn internal(message: impl Into<String>) -> Self {
        ApiError {
            status: 500,
            code: "internal".into(),
            message: message.into(),
            field: None,
        }
    }
}

impl From<cvd_core::Error> for ApiError {
    fn from(e: cvd_core::Error) -> Self {
        ApiError {
            status: match e.kind() {
                ErrorKind::Validation | ErrorKind::Io => 400,
                ErrorKind::Internal => 500,
            },
            code: e.code().into(),
            message: e.to_string(),
            field: e.field(),
        }
    }
}

impl std::fmt::Display for ApiError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} ({})", self.message, self.code)
    }
}

impl std::error::Error for ApiError {}

fn decode_b64(field: &str, s: &str) -> Result<Vec<u8>, ApiError> {
    let payload = match s.split_once(',') {
        Some((head, rest)) if head.starts_with("data:") => rest,
        _ => s,
    };
    STANDARD.decode(payload.trim()).map_err(|e| ApiError {
        status: 400,
        code: "decode_failed".into(),
        message: format!("`{field}` is not valid base64: {e}"),
        field: Some(field.into()),
    })
}

fn with_field(field: &str, e: cvd_core::Error) -> ApiError {
    let mut err = ApiError::from(e);
    err.field = Some(field.to_string());
    err
}

/// Turns the wire request into pipeline parameters plus the input image.
pub fn parse_request(
    req: &ProcessRequest,
) -> Result<(cvd_core::ImageBuffer, ProcessParams), ApiError> {
    let img = decode_png(&decode_b64("image", &req.image)?).map_err(|e| with_field("image", e))?;
    let profile = match &req.profile {
        None => None,
        Some(p) => {
            let kind: Deficiency = p.kind.parse()?;
            Some(DeficiencyProfile::new(kind, p.severity.unwrap_or(1.0))?)
        }
    };
    let recipe = match &req.recipe {
        RecipeField::Text(t) => CorrectionRecipe::parse_text(t)?,
        RecipeField::Steps(steps) => CorrectionRecipe::from_steps(steps)?,
    };
    let layout = match &req.layout {
        Some(l) => l.parse()?,
        None => Layout::Single,
    };
    let mut augment = None;
    if let Some(bands) = &req.bands {
        let band = |kind: ConeClass,
                    field: &str,
                    b64: &Option<String>|
         -> Result<Option<BandImage>, ApiError> {
            let Some(b64) = b64 else { return Ok(None) };
            let png = decode_png(&decode_b64(field, b64)?).map_err(|e| with_field(field, e))?;
            Ok(Some(BandImage::from_image(kind, &png)?))
        };
        let uv = band(ConeClass::Uv, "bands.uv", &bands.uv)?;
        let ir = band(ConeClass::Ir, "bands.ir", &bands.ir)?;
        if uv.is_some() || ir.is_some() {
            augment = Some(AugmentInputs {
                uv,
                ir,
                config: req.augment.unwrap_or_default(),
            });
        }
    }
    let params = ProcessParams {
        profile,
        recipe,
        layout,
        gutter_px: req.gutter_px.unwrap_or(DEFAULT_GUTTER_PX),
        t_ms: req.t_ms,
        augment,
    };
    params.validate(img.width(), img.height())?;
    Ok((img, params))
}

fn applied(params: &ProcessParams, width: u32, height: u32) -> Value {
    let augment = params.augment.as_ref().map(|a| {
        let bands: Vec<&str> = [("uv", a.uv.is_some()), ("ir", a.ir.is_some())]
            .into_iter()
            .filter_map(|(n, on)| on.then_some(n))
            .collect();
        json!({ "bands": bands, "config": a.config })
    });
    json!({
        "profile": params.profile,
        "recipe": params.recipe.to_steps(),
        "layout": params.layout,
        "gutter_px": params.gutter_px,
        "t_ms": params.t_ms,
        "augment": augment,
        "width": width,
        "height": height,
    })
}

/// One request, one frame. Pure apart from the timing field.
pub fn handle_process(req: &ProcessRequest) -> Result<ProcessResponse, ApiError> {
    let start = Instant::now();
    let (img, params) = parse_request(req)?;
    let out = process(&img, &params)?;
    let png = encode_png(&out)?;
    Ok(ProcessResponse {
        image: STANDARD.encode(png),
        timing_ms: start.elapsed().as_secs_f64() * 1e3,
        applied: applied(&params, out.width(), out.height()),
    })
}

/// Parses a raw JSON body and processes it.
pub fn handle_process_json(body: &[u8]) -> Result<ProcessResponse, ApiError> {
    let req: ProcessRequest = serde_json::from_slice(body)
        .map_err(|e| ApiError::malformed(format!("invalid request body: {e}")))?;
    handle_process(&req)
}

/// Everything a client needs to build a valid request.
pub fn handle_capabilities() -> Value {
    let kinds: Vec<Value> = Deficiency::ALL
        .iter()
        .map(|d| {
            json!({
                "kind": d.as_str(),
                "anomalous": d.is_anomalous(),
                "severity": if d.is_anomalous() { json!({"min": 0.0, "max": 1.0, "default": 1.0}) } else { json!({"fixed": 1.0}) },
            })
        })
        .collect();
    let band = |c: ConeClass| {
        let r = SpectralResponse::for_cone(c);
        json!({ "peak_nm": r.peak_nm, "range_nm": [r.lo_nm, r.hi_nm] })
    };
    let defaults = AugmentConfig::default();
    json!({
        "service": "cvd-service",
        "version": env!("CARGO_PKG_VERSION"),
        "deficiencies": kinds,
        "operators": OPERATORS,
        "augment": {
            "bands": { "uv": band(ConeClass::Uv), "ir": band(ConeClass::Ir) },
            "params": [
                { "name": "uv_enabled", "kind": "boolean", "default": defaults.uv_enabled },
                { "name": "ir_enabled", "kind": "boolean", "default": defaults.ir_enabled },
                { "name": "mix", "kind": "number", "default": defaults.mix, "min": 0.0, "max": 1.0 },
                { "name": "uv_display_color", "kind": "color", "default": defaults.uv_display_color.to_hex() },
                { "name": "ir_display_color", "kind": "color", "default": defaults.ir_display_color.to_hex() },
            ],
            "order": ["uv", "ir"],
        },
        "layouts": Layout::ALL.map(Layout::as_str),
        "gutter": { "default_px": DEFAULT_GUTTER_PX, "max_px": MAX_GUTTER_PX, "color": GUTTER_COLOR.to_hex() },
    })
}
