//! Experiment configuration: defaults from the registry, then a JSON file,
//! then command-line overrides. Unknown keys are rejected at every stage.

use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::registry::{lookup, ExperimentInfo, ParamDefault};

pub const DEFAULT_SEED: u64 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("unknown experiment `{0}` (see `sgb list`)")]
    UnknownExperiment(String),
    #[error("no experiment given")]
    MissingExperiment,
    #[error("unknown key `{key}` for experiment `{experiment}`")]
    UnknownKey { key: String, experiment: String },
    #[error("bad value for `{key}`: {reason}")]
    BadValue { key: String, reason: String },
    #[error("malformed config: {0}")]
    Json(#[from] serde_json::Error),
    #[error("cannot read config {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

/// A fully resolved run configuration; serializes to a flat JSON object.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub experiment: String,
    pub seed: u64,
    #[serde(rename = "N")]
    pub n: usize,
    pub format: Format,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(flatten)]
    pub params: BTreeMap<String, Value>,
}

/// Values given on the command line.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub n: Option<usize>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub params: Vec<(String, Value)>,
}

fn bad(key: &str, reason: impl Into<String>) -> ConfigError {
    ConfigError::BadValue { key: key.to_string(), reason: reason.into() }
}

impl ExperimentConfig {
    pub fn defaults(info: &ExperimentInfo) -> Self {
        let params = info
            .params
            .iter()
            .map(|p| {
                let v = match p.default {
                    ParamDefault::Real(x) => Value::from(x),
                    ParamDefault::Int(k) => Value::from(k),
                };
                (p.key.to_string(), v)
            })
            .collect();
        Self {
            experiment: info.name.to_string(),
            seed: DEFAULT_SEED,
            n: info.default_n,
            format: Format::Csv,
            out: None,
            params,
        }
    }

    /// Resolves `experiment` (or the file's `experiment` entry) against its
    /// defaults, the file contents and the overrides, in that order.
    pub fn resolve(experiment: Option<&str>, file: Option<&Map<String, Value>>, overrides: &Overrides) -> Result<Self, ConfigError> {
        let name = match (experiment, file.and_then(|f| f.get("experiment"))) {
            (Some(n), _) => n.to_string(),
            (None, Some(Value::String(n))) => n.clone(),
            (None, Some(other)) => return Err(bad("experiment", format!("expected a string, got {other}"))),
            (None, None) => return Err(ConfigError::MissingExperiment),
        };
        let info = lookup(&name).ok_or_else(|| ConfigError::UnknownExperiment(name.clone()))?;
        let mut cfg = Self::defaults(info);
        if let Some(file) = file {
            for (k, v) in file {
                if k == "experiment" {
                    continue;
                }
                cfg.set(info, k, v)?;
            }
        }
        if let Some(s) = overrides.seed {
            cfg.seed = s;
        }
        if let Some(n) = overrides.n {
            cfg.n = n;
        }
        if let Some(f) = overrides.format {
            cfg.format = f;
        }
        if let Some(o) = &overrides.out {
            cfg.out = Some(o.clone());
        }
        for (k, v) in &overrides.params {
            cfg.set(info, k, v)?;
        }
        Ok(cfg)
    }

    fn set(&mut self, info: &ExperimentInfo, key: &str, v: &Value) -> Result<(), ConfigError> {
        match key {
            "seed" => self.seed = v.as_u64().ok_or_else(|| bad(key, "expected a nonnegative integer"))?,
            "N" => {
                let n = v.as_u64().ok_or_else(|| bad(key, "expected a nonnegative integer"))?;
                self.n = usize::try_from(n).map_err(|_| bad(key, "too large"))?;
            }
            "format" => self.format = serde_json::from_value(v.clone()).map_err(|_| bad(key, "expected \"csv\" or \"json\""))?,
            "out" => self.out = Some(PathBuf::from(v.as_str().ok_or_else(|| bad(key, "expected a path string"))?)),
            _ => {
                let spec = info.param(key).ok_or_else(|| ConfigError::UnknownKey {
                    key: key.to_string(),
                    experiment: info.name.to_string(),
                })?;
                let value = match spec.default {
                    ParamDefault::Real(_) => {
                        let x = v.as_f64().filter(|x| x.is_finite()).ok_or_else(|| bad(key, "expected a finite number"))?;
                        Value::from(x)
                    }
                    ParamDefault::Int(_) => Value::from(v.as_u64().ok_or_else(|| bad(key, "expected a nonnegative integer"))?),
                };
                self.params.insert(key.to_string(), value);
            }
        }
        Ok(())
    }

    /// Parses a JSON config; every key must be known for its experiment.
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let map = parse_object(text)?;
        Self::resolve(None, Some(&map), &Overrides::default())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn real(&self, key: &str) -> f64 {
        self.params.get(key).and_then(Value::as_f64).unwrap_or_else(|| panic!("`{key}` is not a registered real parameter"))
    }

    pub fn int(&self, key: &str) -> u64 {
        self.params.get(key).and_then(Value::as_u64).unwrap_or_else(|| panic!("`{key}` is not a registered integer parameter"))
    }
}

pub fn parse_object(text: &str) -> Result<Map<String, Value>, ConfigError> {
    match serde_json::from_str::<Value>(text)? {
        Value::Object(m) => Ok(m),
        other => Err(bad("config", format!("expected a JSON object, got {other}"))),
    }
}

pub fn read_config_file(path: &std::path::Path) -> Result<Map<String, Value>, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.to_path_buf(), source })?;
    parse_object(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip() {
        for info in crate::registry::REGISTRY.iter() {
            let cfg = ExperimentConfig::defaults(info);
            assert_eq!(ExperimentConfig::from_json(&cfg.to_json()).unwrap(), cfg);
        }
    }

    #[test]
    fn flags_win_over_file() {
        let file = parse_object(r#"{"experiment": "constants", "p": 0.3, "seed": 9}"#).unwrap();
        let ov = Overrides { seed: Some(4), params: vec![("p".into(), Value::from(0.7))], ..Default::default() };
        let cfg = ExperimentConfig::resolve(None, Some(&file), &ov).unwrap();
        assert_eq!(cfg.seed, 4);
        assert_eq!(cfg.real("p"), 0.7);
    }

    #[test]
    fn unknown_keys_rejected() {
        let err = ExperimentConfig::from_json(r#"{"experiment": "constants", "eps": 0.1}"#).unwrap_err();
        assert!(matches!(err, ConfigError::UnknownKey { .. }), "{err}");
        assert!(ExperimentConfig::from_json(r#"{"experiment": "nope"}"#).is_err());
        assert!(ExperimentConfig::from_json(r#"{"experiment": "sharpness-blocks", "k": 1.5}"#).is_err());
        assert!(ExperimentConfig::from_json("[1, 2]").is_err());
    }
}
