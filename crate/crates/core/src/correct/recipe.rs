//! Ordered chains of correction operators and their serialized forms.
//!
//! JSON form, one object per step:
//!
//! ```json
//! [{"op": "passive_filter", "params": {"attenuation": 0.2}}, {"op": "desaturate"}]
//! ```
//!
//! Text form, steps separated by `,` and parameters by `:`:
//!
//! ```text
//! passive_filter:attenuation=0.2,desaturate
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::*;
use crate::color::{ImageBuffer, PixelSrgb};
use crate::simulate::DeficiencyProfile;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ParamKind {
    Number,
    Integer,
    Color,
}

#[derive(Debug, Clone, Serialize)]
pub struct ParamInfo {
    pub name: &'static str,
    pub kind: ParamKind,
    pub default: &'static str,
    pub min: Option<f64>,
    pub max: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct OperatorInfo {
    pub name: &'static str,
    pub summary: &'static str,
    pub needs_profile: bool,
    pub params: &'static [ParamInfo],
}

const fn num(
    name: &'static str,
    default: &'static str,
    min: Option<f64>,
    max: Option<f64>,
) -> ParamInfo {
    ParamInfo {
        name,
        kind: ParamKind::Number,
        default,
        min,
        max,
    }
}

const fn color(name: &'static str, default: &'static str) -> ParamInfo {
    ParamInfo {
        name,
        kind: ParamKind::Color,
        default,
        min: None,
        max: None,
    }
}

/// Every recipe operator with its parameters and defaults.
pub const OPERATORS: &[OperatorInfo] = &[
    OperatorInfo {
        name: "red_gray",
        summary: "replace each pixel by the gray level of its red channel",
        needs_profile: false,
        params: &[],
    },
    OperatorInfo {
        name: "desaturate",
        summary: "set HSV saturation to zero",
        needs_profile: false,
        params: &[],
    },
    OperatorInfo {
        name: "luminance_equalize",
        summary: "raise HSV value on pixels the profile confuses",
        needs_profile: true,
        params: &[num("gain", "1.3", Some(1.0), Some(3.0))],
    },
    OperatorInfo {
        name: "passive_filter",
        summary: "attenuate green in linear light, like a magenta lens",
        needs_profile: false,
        params: &[num("attenuation", "0.2", Some(0.0), Some(1.0))],
    },
    OperatorInfo {
        name: "blink",
        summary: "flash a highlight over confusable pixels during the first half of each period",
        needs_profile: true,
        params: &[
            ParamInfo {
                name: "period_ms",
                kind: ParamKind::Integer,
                default: "1000",
                min: Some(1.0),
                max: None,
            },
            num("tau", "10", Some(0.0), None),
            color("highlight", "#0000ff"),
        ],
    },
    OperatorInfo {
        name: "edge_enhance",
        summary: "draw borders where the confusion distance changes sharply",
        needs_profile: true,
        params: &[
            color("edge_color", "#ffff00"),
            num("threshold", "8", Some(0.0), None),
        ],
    },
];

/// A validated recipe step.
#[derive(Debug, Clone, PartialEq)]
pub enum Operator {
    RedGray,
    Desaturate,
    LuminanceEqualize {
        gain: f64,
    },
    PassiveFilter {
        attenuation: f64,
    },
    Blink {
        period_ms: u64,
        tau: f64,
        highlight: PixelSrgb,
    },
    EdgeEnhance {
        edge_color: PixelSrgb,
        threshold: f64,
    },
}

impl Operator {
    pub fn name(&self) -> &'static str {
        match self {
            Operator::RedGray => "red_gray",
            Operator::Desaturate => "desaturate",
            Operator::LuminanceEqualize { .. } => "luminance_equalize",
            Operator::PassiveFilter { .. } => "passive_filter",
            Operator::Blink { .. } => "blink",
            Operator::EdgeEnhance { .. } => "edge_enhance",
        }
    }

    pub fn needs_profile(&self) -> bool {
        matches!(
            self,
            Operator::LuminanceEqualize { .. }
                | Operator::Blink { .. }
                | Operator::EdgeEnhance { .. }
        )
    }

    /// Builds an operator from its name and a parameter map; missing
    /// parameters take their defaults.
    pub fn from_parts(op: &str, params: &BTreeMap<String, Value>) -> Result<Operator> {
        let info = OPERATORS
            .iter()
            .find(|i| i.name == op)
            .ok_or_else(|| Error::UnknownOperator(op.to_string()))?;
        if let Some(unknown) = params
            .keys()
            .find(|k| !info.params.iter().any(|p| p.name == k.as_str()))
        {
            return Err(Error::UnknownParameter {
                op: op.to_string(),
                param: unknown.clone(),
            });
        }
        let number = |name: &str| -> Result<f64> {
            let spec = info
                .params
                .iter()
                .find(|p| p.name == name)
                .expect("declared parameter");
            let v = match params.get(name) {
                None => spec.default.parse::<f64>().expect("numeric default"),
                Some(Value::Number(n)) => n.as_f64().unwrap_or(f64::NAN),
                Some(Value::String(s)) => s
                    .trim()
                    .parse::<f64>()
                    .map_err(|_| Error::invalid(name, format!("`{s}` is not a number")))?,
                Some(other) => {
                    return Err(Error::invalid(
                        name,
                        format!("expected a number, got {other}"),
                    ))
                }
            };
            if !v.is_finite() {
                return Err(Error::invalid(name, "must be finite"));
            }
            Ok(v)
        };
        let color = |name: &str| -> Result<PixelSrgb> {
            let spec = info
                .params
                .iter()
                .find(|p| p.name == name)
                .expect("declared parameter");
            match params.get(name) {
                None => Ok(PixelSrgb::parse(spec.default).expect("color default")),
                Some(Value::String(s)) => PixelSrgb::parse(s)
                    .ok_or_else(|| Error::invalid(name, format!("`{s}` is not a color"))),
                Some(Value::Array(a)) if a.len() == 3 => {
                    let mut c = [0u8; 3];
                    for (slot, v) in c.iter_mut().zip(a) {
                        *slot = v
                            .as_u64()
                            .and_then(|n| u8::try_from(n).ok())
                            .ok_or_else(|| {
                                Error::invalid(name, "channels must be integers in 0..=255")
                            })?;
                    }
                    Ok(PixelSrgb::from(c))
                }
                Some(other) => Err(Error::invalid(
                    name,
                    format!("expected a color, got {other}"),
                )),
            }
        };

        let op = match info.name {
            "red_gray" => Operator::RedGray,
            "desaturate" => Operator::Desaturate,
            "luminance_equalize" => Operator::LuminanceEqualize {
                gain: number("gain")?,
            },
            "passive_filter" => Operator::PassiveFilter {
                attenuation: number("attenuation")?,
            },
            "blink" => {
                let period = number("period_ms")?;
                if period.fract() != 0.0 || period < 1.0 {
                    return Err(Error::invalid(
                        "period_ms",
                        format!("must be a positive integer, got {period}"),
                    ));
                }
                Operator::Blink {
                    period_ms: period as u64,
                    tau: number("tau")?,
                    highlight: color("highlight")?,
                }
            }
            "edge_enhance" => Operator::EdgeEnhance {
                edge_color: color("edge_color")?,
                threshold: number("threshold")?,
            },
            _ => unreachable!("operator table and match are in sync"),
        };
        op.validate()?;
        Ok(op)
    }

    /// Range checks that do not need an image.
    pub fn validate(&self) -> Result<()> {
        match *self {
            Operator::LuminanceEqualize { gain } if !(1.0..=3.0).contains(&gain) => Err(
                Error::invalid("gain", format!("must be in [1, 3], got {gain}")),
            ),
            Operator::PassiveFilter { attenuation } if !(0.0..=1.0).contains(&attenuation) => {
                Err(Error::invalid(
                    "attenuation",
                    format!("must be in [0, 1], got {attenuation}"),
                ))
            }
            Operator::Blink { period_ms: 0, .. } => {
                Err(Error::invalid("period_ms", "must be positive"))
            }
            Operator::Blink { tau, .. } if !(tau > 0.0) => Err(Error::invalid(
                "tau",
                format!("must be positive, got {tau}"),
            )),
            Operator::EdgeEnhance { threshold, .. } if !(threshold > 0.0) => Err(Error::invalid(
                "threshold",
                format!("must be positive, got {threshold}"),
            )),
            _ => Ok(()),
        }
    }

    /// Normalized parameter map with every parameter present.
    pub fn params(&self) -> BTreeMap<String, Value> {
        let mut m = BTreeMap::new();
        match *self {
            Operator::RedGray | Operator::Desaturate => {}
            Operator::LuminanceEqualize { gain } => {
                m.insert("gain".into(), gain.into());
            }
            Operator::PassiveFilter { attenuation } => {
                m.insert("attenuation".into(), attenuation.into());
            }
            Operator::Blink {
                period_ms,
                tau,
                highlight,
            } => {
                m.insert("period_ms".into(), period_ms.into());
                m.insert("tau".into(), tau.into());
                m.insert("highlight".into(), highlight.to_hex().into());
            }
            Operator::EdgeEnhance {
                edge_color,
                threshold,
            } => {
                m.insert("edge_color".into(), edge_color.to_hex().into());
                m.insert("threshold".into(), threshold.into());
            }
        }
        m
    }

    pub fn apply(
        &self,
        img: &ImageBuffer,
        prof: Option<&DeficiencyProfile>,
        t_ms: u64,
    ) -> Result<ImageBuffer> {
        let profile = || prof.ok_or_else(|| Error::MissingProfile(self.name().to_string()));
        match *self {
            Operator::RedGray => Ok(red_channel_grayscale(img)),
            Operator::Desaturate => Ok(desaturate_helper(img)),
            Operator::LuminanceEqualize { gain } => luminance_equalize(img, profile()?, gain),
            Operator::PassiveFilter { attenuation } => passive_filter(img, attenuation),
            Operator::Blink {
                period_ms,
                tau,
                highlight,
            } => {
                let state = BlinkState::new(period_ms, t_ms)?;
                if !state.is_on() {
                    return Ok(img.clone());
                }
                let mask = confusion_mask(img, profile()?, tau)?;
                blink_overlay(img, &mask, state, highlight)
            }
            Operator::EdgeEnhance {
                edge_color,
                threshold,
            } => edge_enhance_with_threshold(img, profile()?, edge_color, threshold),
        }
    }
}

impl fmt::Display for Operator {
    /// Text form, e.g. `passive_filter:attenuation=0.2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())?;
        for (k, v) in self.params() {
            match v {
                Value::String(s) => write!(f, ":{k}={s}")?,
                other => write!(f, ":{k}={other}")?,
            }
        }
        Ok(())
    }
}

impl FromStr for Operator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.trim().split(':');
        let op = parts.next().unwrap_or_default().trim();
        let mut params = BTreeMap::new();
        for kv in parts {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Error::invalid(op, format!("expected key=value, got `{kv}`")))?;
            params.insert(k.trim().to_string(), Value::String(v.trim().to_string()));
        }
        Operator::from_parts(op, &params)
    }
}

/// Serialized step: operator name plus parameter map.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecipeStep {
    pub op: String,
    #[serde(default)]
    pub params: BTreeMap<String, Value>,
}

impl From<&Operator> for RecipeStep {
    fn from(op: &Operator) -> Self {
        RecipeStep {
            op: op.name().to_string(),
            params: op.params(),
        }
    }
}

/// Ordered operator list; empty means identity.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CorrectionRecipe {
    pub steps: Vec<Operator>,
}

impl CorrectionRecipe {
    pub fn new(steps: Vec<Operator>) -> Self {
        CorrectionRecipe { steps }
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn needs_profile(&self) -> bool {
        self.steps.iter().any(Operator::needs_profile)
    }

    pub fn from_steps(steps: &[RecipeStep]) -> Result<Self> {
        steps
            .iter()
            .enumerate()
            .map(|(index, s)| {
                Operator::from_parts(&s.op, &s.params).map_err(|e| Error::Step {
                    index,
                    source: Box::new(e),
                })
            })
            .collect::<Result<Vec<_>>>()
            .map(CorrectionRecipe::new)
    }

    pub fn to_steps(&self) -> Vec<RecipeStep> {
        self.steps.iter().map(RecipeStep::from).collect()
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let steps: Vec<RecipeStep> = serde_json::from_str(s)
            .map_err(|e| Error::invalid("recipe", format!("malformed JSON: {e}")))?;
        Self::from_steps(&steps)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_steps()).expect("recipe steps serialize")
    }

    /// Parses the comma-separated text form. Blank input is the empty recipe.
    pub fn parse_text(s: &str) -> Result<Self> {
        s.split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .enumerate()
            .map(|(index, t)| {
                t.parse::<Operator>().map_err(|e| Error::Step {
                    index,
                    source: Box::new(e),
                })
            })
            .collect::<Result<Vec<_>>>()
            .map(CorrectionRecipe::new)
    }
}

impl fmt::Display for CorrectionRecipe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, op) in self.steps.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{op}")?;
        }
        Ok(())
    }
}

/// Folds the recipe over the image left to right.
pub fn apply_recipe(
    img: &ImageBuffer,
    recipe: &CorrectionRecipe,
    prof: Option<&DeficiencyProfile>,
    t_ms: u64,
) -> Result<ImageBuffer> {
    let mut current = img.clone();
    for (index, op) in recipe.steps.iter().enumerate() {
        current = op.apply(&current, prof, t_ms).map_err(|e| Error::Step {
            index,
            source: Box::new(e),
        })?;
    }
    Ok(current)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Deficiency;

    #[test]
    fn text_and_json_forms_agree() {
        let text =
            CorrectionRecipe::parse_text("passive_filter:attenuation=0.2, desaturate").unwrap();
        let json = CorrectionRecipe::from_json(
            r#"[{"op":"passive_filter","params":{"attenuation":0.2}},{"op":"desaturate"}]"#,
        )
        .unwrap();
        assert_eq!(text, json);
        assert_eq!(
            text.to_string(),
            "passive_filter:attenuation=0.2,desaturate"
        );
        assert_eq!(CorrectionRecipe::from_json(&text.to_json()).unwrap(), text);
    }

    #[test]
    fn defaults_fill_in() {
        let r =
            CorrectionRecipe::parse_text("luminance_equalize,blink,edge_enhance,passive_filter")
                .unwrap();
        assert_eq!(
            r.steps,
            vec![
                Operator::LuminanceEqualize { gain: 1.3 },
                Operator::Blink {
                    period_ms: 1000,
                    tau: 10.0,
                    highlight: DEFAULT_HIGHLIGHT
                },
                Operator::EdgeEnhance {
                    edge_color: DEFAULT_EDGE_COLOR,
                    threshold: 8.0
                },
                Operator::PassiveFilter { attenuation: 0.2 },
            ]
        );
        assert!(CorrectionRecipe::parse_text("").unwrap().is_empty());
    }

    #[test]
    fn rejects_bad_steps_with_index() {
        let err = CorrectionRecipe::parse_text("red_gray,sharpen").unwrap_err();
        assert!(matches!(err, Error::Step { index: 1, .. }));
        assert_eq!(err.code(), "unknown_operator");

        let err = CorrectionRecipe::parse_text("passive_filter:attenuation=1.5").unwrap_err();
        assert_eq!(err.code(), "invalid_parameter");
        assert_eq!(err.field().as_deref(), Some("recipe[0].attenuation"));

        let err = CorrectionRecipe::parse_text("desaturate:amount=3").unwrap_err();
        assert_eq!(err.code(), "unknown_parameter");

        let err = CorrectionRecipe::parse_text("blink:period_ms=0").unwrap_err();
        assert_eq!(err.code(), "invalid_parameter");
        let err = CorrectionRecipe::parse_text("edge_enhance:edge_color=#zz0000").unwrap_err();
        assert_eq!(err.code(), "invalid_parameter");
        let err = CorrectionRecipe::parse_text("passive_filter:attenuation").unwrap_err();
        assert_eq!(err.code(), "invalid_parameter");
        assert!(CorrectionRecipe::from_json("{").is_err());
    }

    #[test]
    fn color_params_accept_arrays() {
        let r = CorrectionRecipe::from_json(r#"[{"op":"blink","params":{"highlight":[1,2,3]}}]"#)
            .unwrap();
        assert!(
            matches!(r.steps[0], Operator::Blink { highlight, .. } if highlight == PixelSrgb::new(1, 2, 3))
        );
        assert!(CorrectionRecipe::from_json(
            r#"[{"op":"blink","params":{"highlight":[1,2,300]}}]"#
        )
        .is_err());
    }

    #[test]
    fn empty_recipe_is_identity() {
        let img = ImageBuffer::filled(2, 2, PixelSrgb::new(9, 8, 7)).unwrap();
        assert_eq!(
            apply_recipe(&img, &CorrectionRecipe::default(), None, 0).unwrap(),
            img
        );
    }

    #[test]
    fn missing_profile_is_reported() {
        let img = ImageBuffer::filled(2, 2, PixelSrgb::new(255, 0, 0)).unwrap();
        let r = CorrectionRecipe::parse_text("red_gray,edge_enhance").unwrap();
        let err = apply_recipe(&img, &r, None, 0).unwrap_err();
        assert!(matches!(err, Error::Step { index: 1, .. }));
        assert_eq!(err.code(), "missing_profile");
        let prof = DeficiencyProfile::full(Deficiency::Protanopia);
        assert!(apply_recipe(&img, &r, Some(&prof), 0).is_ok());
    }

    #[test]
    fn operator_table_covers_every_variant() {
        for info in OPERATORS {
            let op = Operator::from_parts(info.name, &BTreeMap::new()).unwrap();
            assert_eq!(op.name(), info.name);
            assert_eq!(op.needs_profile(), info.needs_profile);
            assert_eq!(op.params().len(), info.params.len());
        }
    }
}
