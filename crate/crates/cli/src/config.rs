//! Model configuration files.
//!
//! ```toml
//! kind = "fendley"
//! L = 6
//! r = 2
//! Q = 2             # optional, default 2
//! boundary = "periodic"
//! couplings = []    # empty: all 1; L terms; or r+1 staggered values
//! lambda = 1.0
//! theta = 0.0
//! ```
//!
//! JSON with the same keys is accepted too (by extension, or as a fallback
//! when the text is not TOML). Unknown keys are rejected.

use std::path::Path;

use onsager_core::{Boundary, ModelKind, ModelSpec};
use serde::Deserialize;

use crate::CliError;

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub kind: String,
    #[serde(rename = "L", alias = "l")]
    pub l: usize,
    #[serde(default = "default_r")]
    pub r: usize,
    #[serde(rename = "Q", alias = "q", default = "default_q")]
    pub q: u8,
    #[serde(default)]
    pub boundary: Option<String>,
    #[serde(default)]
    pub couplings: Vec<f64>,
    #[serde(default = "default_lambda")]
    pub lambda: f64,
    #[serde(default)]
    pub theta: f64,
}

fn default_r() -> usize {
    1
}

fn default_q() -> u8 {
    2
}

fn default_lambda() -> f64 {
    1.0
}

impl ModelConfig {
    pub fn parse(text: &str, json: bool) -> Result<Self, CliError> {
        if json {
            return serde_json::from_str(text).map_err(|e| CliError::Config(format!("invalid JSON config: {e}")));
        }
        match toml::from_str(text) {
            Ok(c) => Ok(c),
            Err(e) if text.trim_start().starts_with('{') => serde_json::from_str(text)
                .map_err(|j| CliError::Config(format!("config is neither TOML ({e}) nor JSON ({j})"))),
            Err(e) => Err(CliError::Config(format!("invalid TOML config: {e}"))),
        }
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        let json = path.extension().is_some_and(|x| x.eq_ignore_ascii_case("json"));
        Self::parse(&text, json)
    }

    pub fn to_spec(&self) -> Result<ModelSpec, CliError> {
        let kind: ModelKind = self.kind.parse().map_err(|_| CliError::UnknownKind(self.kind.clone()))?;
        let boundary = match &self.boundary {
            None => Boundary::Periodic,
            Some(b) => b.parse().map_err(|e: onsager_core::Error| CliError::Config(e.to_string()))?,
        };
        let spec = ModelSpec {
            kind,
            l: self.l,
            r: self.r,
            q: self.q,
            boundary,
            couplings: self.couplings.clone(),
            lambda: self.lambda,
            theta: self.theta,
        };
        spec.validate()?;
        Ok(spec)
    }
}

pub fn load_spec(path: &Path) -> Result<ModelSpec, CliError> {
    ModelConfig::load(path)?.to_spec()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toml_and_json_agree() {
        let t = ModelConfig::parse("kind = \"fendley\"\nL = 6\nr = 2\n", false).unwrap();
        let j = ModelConfig::parse(r#"{"kind": "fendley", "L": 6, "r": 2}"#, false).unwrap();
        assert_eq!(t, j);
        assert_eq!(t.to_spec().unwrap(), ModelSpec::fendley(6, 2));
    }

    #[test]
    fn rejects_unknown_keys_and_kinds() {
        assert!(matches!(
            ModelConfig::parse("kind = \"tfim\"\nL = 4\nfoo = 1\n", false),
            Err(CliError::Config(_))
        ));
        let c = ModelConfig::parse("kind = \"xxz\"\nL = 4\n", false).unwrap();
        assert!(matches!(c.to_spec(), Err(CliError::UnknownKind(_))));
        let c = ModelConfig::parse("kind = \"tfim\"\nL = 4\nQ = 3\n", false).unwrap();
        assert_eq!(c.to_spec().unwrap_err().exit_code(), crate::EXIT_CONFIG);
    }
}
