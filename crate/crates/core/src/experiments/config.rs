use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

/// Run manifest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub schema_version: u32,
    #[serde(default = "default_seed")]
    pub seed: u64,
    pub experiments: Vec<ExperimentConfig>,
}

fn default_seed() -> u64 {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub id: String,
    #[serde(default)]
    pub params: Map<String, Value>,
}

impl ExperimentConfig {
    pub fn new(id: &str) -> Self {
        Self {
            id: id.into(),
            params: Map::new(),
        }
    }

    /// Typed parameters; missing fields take their defaults.
    pub(crate) fn typed<T: DeserializeOwned>(&self) -> Result<T> {
        serde_json::from_value(Value::Object(self.params.clone()))
            .map_err(|e| Error::Config(format!("{}: {e}", self.id)))
    }
}

impl Config {
    pub fn parse(json: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(json).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Every registered experiment with default parameters.
    pub fn full_suite(seed: u64) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            seed,
            experiments: super::EXPERIMENTS.iter().map(|e| ExperimentConfig::new(e.id)).collect(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Config(format!(
                "schema_version {} not supported (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        if self.experiments.is_empty() {
            return Err(Error::Config("no experiments listed".into()));
        }
        for e in &self.experiments {
            super::info(&e.id).ok_or_else(|| Error::UnknownExperiment(e.id.clone()))?;
            super::check_params(e)?;
        }
        Ok(())
    }
}
