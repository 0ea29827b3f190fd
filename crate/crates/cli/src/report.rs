//! Report documents and output routing.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use dataset_trust::{Opinion, TrustError};
use serde_json::{json, Map, Value};

use crate::config::RunConfig;

pub const TOOL: &str = "dstrust";

/// A report under construction: the common envelope plus command fields.
pub struct Report {
    fields: Map<String, Value>,
}

impl Report {
    pub fn new(command: &str, config: &RunConfig) -> Self {
        let mut fields = Map::new();
        fields.insert("tool".into(), json!(TOOL));
        fields.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
        fields.insert("command".into(), json!(command));
        fields.insert(
            "config".into(),
            serde_json::to_value(config).expect("config serializes"),
        );
        Self { fields }
    }

    pub fn set(&mut self, key: &str, value: impl serde::Serialize) -> &mut Self {
        let value = serde_json::to_value(value).expect("report field serializes");
        self.fields.insert(key.into(), value);
        self
    }

    /// Sets `opinion` and its projected probability.
    pub fn opinion(&mut self, o: &Opinion) -> &mut Self {
        self.set("opinion", o);
        self.set("projected_probability", o.projected_probability())
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(&self.fields).expect("report serializes");
        text.push('\n');
        text
    }

    /// Human-readable summary: scalar fields, then the opinion.
    pub fn to_summary(&self) -> String {
        let mut out = String::new();
        for (key, value) in &self.fields {
            match value {
                Value::String(s) => {
                    let _ = writeln!(out, "{key}: {s}");
                }
                Value::Number(n) if key != "projected_probability" => {
                    let _ = writeln!(out, "{key}: {n}");
                }
                _ => {}
            }
        }
        if let Some(o) = self
            .fields
            .get("opinion")
            .and_then(|v| serde_json::from_value::<Opinion>(v.clone()).ok())
        {
            let _ = writeln!(
                out,
                "opinion: belief {:.6}, disbelief {:.6}, uncertainty {:.6}, base rate {:.6}",
                o.belief(),
                o.disbelief(),
                o.uncertainty(),
                o.base_rate()
            );
            let _ = writeln!(
                out,
                "projected probability: {:.6}",
                o.projected_probability()
            );
        }
        out
    }

    pub fn render(&self, pretty: bool) -> String {
        if pretty {
            self.to_summary()
        } else {
            self.to_json()
        }
    }
}

/// Writes to `out` when given, else standard output.
pub fn emit(text: &str, out: Option<&Path>) -> Result<(), TrustError> {
    match out {
        Some(path) => {
            fs::write(path, text).map_err(|e| TrustError::Io(format!("{}: {e}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
