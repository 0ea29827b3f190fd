//! Run configuration: JSON file, then `--set` overrides, then command flags.

use std::fs;
use std::path::{Path, PathBuf};

use dataset_trust::{BiasConfig, Method2Mode, QuantConfig, SplitMode};
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{CliError, CliResult};

/// Traffic-sign classes of the GTSRB "danger" group (ids 11 and 18–31).
pub const GTSRB_WARNING_IDS: [&str; 15] = [
    "11", "18", "19", "20", "21", "22", "23", "24", "25", "26", "27", "28", "29", "30", "31",
];

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub quant: QuantConfig,
    pub bias: BiasConfig,
    pub sim: SimSettings,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimSettings {
    /// Base distribution; the bundled GTSRB counts when absent.
    pub counts: Option<PathBuf>,
    pub n_oems: usize,
    /// Defaults to every `k` in `0..=n_oems`.
    pub k_values: Option<Vec<usize>>,
    pub seed: u64,
    pub imbalance_class_ids: Vec<String>,
    pub split_mode: SplitMode,
    pub method2_mode: Method2Mode,
}

impl Default for SimSettings {
    fn default() -> Self {
        Self {
            counts: None,
            n_oems: 100,
            k_values: None,
            seed: 7,
            imbalance_class_ids: GTSRB_WARNING_IDS.map(String::from).to_vec(),
            split_mode: SplitMode::Stratified,
            method2_mode: Method2Mode::Baseline,
        }
    }
}

impl RunConfig {
    pub fn load(path: Option<&Path>, overrides: &[String]) -> CliResult<Self> {
        let mut doc = match path {
            Some(p) => {
                let text = fs::read_to_string(p).map_err(|e| {
                    CliError::usage(format!("cannot read config {}: {e}", p.display()))
                })?;
                serde_json::from_str(&text)
                    .map_err(|e| CliError::usage(format!("config {}: {e}", p.display())))?
            }
            None => Value::Object(Map::new()),
        };
        for item in overrides {
            apply_override(&mut doc, item)?;
        }
        serde_json::from_value(doc).map_err(|e| CliError::usage(format!("configuration: {e}")))
    }
}

/// Applies `a.b.c=value`. The value is read as JSON when it parses, else as
/// a plain string.
fn apply_override(doc: &mut Value, item: &str) -> CliResult<()> {
    let (key, raw) = item
        .split_once('=')
        .ok_or_else(|| CliError::usage(format!("--set expects key=value, got '{item}'")))?;
    let path: Vec<&str> = key.trim().split('.').collect();
    if path.iter().any(|p| p.is_empty()) {
        return Err(CliError::usage(format!(
            "--set has an empty key segment in '{key}'"
        )));
    }
    let value =
        serde_json::from_str(raw.trim()).unwrap_or_else(|_| Value::String(raw.trim().to_string()));
    let mut node = doc;
    for segment in &path[..path.len() - 1] {
        if !node.is_object() {
            *node = Value::Object(Map::new());
        }
        node = node
            .as_object_mut()
            .expect("just made an object")
            .entry(segment.to_string())
            .or_insert_with(|| Value::Object(Map::new()));
    }
    if !node.is_object() {
        *node = Value::Object(Map::new());
    }
    node.as_object_mut()
        .expect("just made an object")
        .insert(path[path.len() - 1].to_string(), value);
    Ok(())
}
