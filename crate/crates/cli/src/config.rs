//! Optional defaults file.
//!
//! Either `key = value` lines (`#` starts a comment):
//!
//! ```text
//! kind = protanomaly
//! severity = 0.7
//! recipe = passive_filter:attenuation=0.3,desaturate
//! ```
//!
//! or the same keys as a JSON object, where `recipe` may also be a step list.

use std::path::Path;

use serde_json::Value;

use cvd_core::correct::CorrectionRecipe;
use cvd_core::{Error, Result};

const KEYS: &[&str] = &[
    "kind", "severity", "recipe", "layout", "gutter", "t_ms", "mix", "uv_color", "ir_color",
];

#[derive(Debug, Clone, Default, PartialEq)]
pub struct FileConfig {
    pub kind: Option<String>,
    pub severity: Option<f64>,
    pub recipe: Option<CorrectionRecipe>,
    pub layout: Option<String>,
    pub gutter: Option<u32>,
    pub t_ms: Option<u64>,
    pub mix: Option<f64>,
    pub uv_color: Option<String>,
    pub ir_color: Option<String>,
}

fn field(key: &str) -> String {
    format!("config.{key}")
}

fn number<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.trim()
        .parse()
        .map_err(|_| Error::invalid(field(key), format!("`{v}` is not a valid number")))
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        if text.trim_start().starts_with('{') {
            let v: Value = serde_json::from_str(text)
                .map_err(|e| Error::invalid("config", format!("malformed JSON: {e}")))?;
            let obj = v
                .as_object()
                .ok_or_else(|| Error::invalid("config", "expected a JSON object"))?;
            let mut cfg = FileConfig::default();
            for (k, v) in obj {
                match (k.as_str(), v) {
                    ("recipe", Value::Array(_)) => {
                        cfg.recipe = Some(CorrectionRecipe::from_json(&v.to_string())?);
                    }
                    (_, Value::String(s)) => cfg.set(k, s)?,
                    (_, Value::Number(n)) => cfg.set(k, &n.to_string())?,
                    _ => return Err(Error::invalid(field(k), "unsupported value type")),
                }
            }
            return Ok(cfg);
        }
        let mut cfg = FileConfig::default();
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                Error::invalid("config", format!("line {}: expected `key = value`", n + 1))
            })?;
            cfg.set(k.trim(), v.trim())?;
        }
        Ok(cfg)
    }

    fn set(&mut self, key: &str, v: &str) -> Result<()> {
        match key {
            "kind" => self.kind = Some(v.to_string()),
            "severity" => self.severity = Some(number(key, v)?),
            "recipe" => self.recipe = Some(CorrectionRecipe::parse_text(v)?),
            "layout" => self.layout = Some(v.to_string()),
            "gutter" => self.gutter = Some(number(key, v)?),
            "t_ms" => self.t_ms = Some(number(key, v)?),
            "mix" => self.mix = Some(number(key, v)?),
            "uv_color" => self.uv_color = Some(v.to_string()),
            "ir_color" => self.ir_color = Some(v.to_string()),
            _ => {
                return Err(Error::invalid(
                    field(key),
                    format!("unknown key; expected one of {}", KEYS.join(", ")),
                ))
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_and_json_agree() {
        let text = FileConfig::parse(
            "# user profile\nkind = protanomaly\nseverity = 0.7\nrecipe = red_gray\n",
        )
        .unwrap();
        let json = FileConfig::parse(
            r#"{"kind": "protanomaly", "severity": 0.7, "recipe": [{"op": "red_gray"}]}"#,
        )
        .unwrap();
        assert_eq!(text, json);
        assert_eq!(text.severity, Some(0.7));
    }

    #[test]
    fn rejects_unknown_keys_and_bad_numbers() {
        let e = FileConfig::parse("colour = red").unwrap_err();
        assert_eq!(e.field().as_deref(), Some("config.colour"));
        assert!(FileConfig::parse("severity = lots").is_err());
        assert!(FileConfig::parse("just words").is_err());
        assert!(FileConfig::parse(r#"{"kind": true}"#).is_err());
    }
}
