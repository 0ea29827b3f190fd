//! Reading counts files and opinion documents.

use std::fs;
use std::path::{Path, PathBuf};

use dataset_trust::fixtures::GTSRB_TRAIN_CSV;
use dataset_trust::{ClassDistribution, CountsFormat, Opinion, TrustError};
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

/// Stands in for a counts path to select the bundled GTSRB training counts.
pub const BUILTIN_GTSRB: &str = "builtin:gtsrb";

/// Digest record echoed into reports.
#[derive(Debug, Clone, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classes: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub total: Option<u64>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

pub fn read_bytes(path: &Path) -> Result<Vec<u8>, TrustError> {
    fs::read(path).map_err(|e| TrustError::Io(format!("{}: {e}", path.display())))
}

pub fn load_counts(path: &Path) -> Result<(ClassDistribution, InputDigest), TrustError> {
    let (bytes, format) = if path == Path::new(BUILTIN_GTSRB) {
        (GTSRB_TRAIN_CSV.as_bytes().to_vec(), CountsFormat::Csv)
    } else {
        (read_bytes(path)?, CountsFormat::from_path(path))
    };
    let d = ClassDistribution::load(bytes.as_slice(), format).map_err(|e| annotate(e, path))?;
    let digest = InputDigest {
        path: path.display().to_string(),
        sha256: sha256_hex(&bytes),
        classes: Some(d.num_classes()),
        total: Some(d.total()),
    };
    Ok((d, digest))
}

fn annotate(e: TrustError, path: &Path) -> TrustError {
    match e {
        TrustError::Format(msg) => TrustError::Format(format!("{}: {msg}", path.display())),
        other => other,
    }
}

/// Opinions from a JSON file holding an opinion record, a report with an
/// `opinion` field, or an array of either.
pub fn read_opinions(path: &Path) -> Result<(Vec<Opinion>, InputDigest), TrustError> {
    let bytes = read_bytes(path)?;
    let doc: Value = serde_json::from_slice(&bytes)
        .map_err(|e| TrustError::Format(format!("{}: {e}", path.display())))?;
    let items = match doc {
        Value::Array(items) => items,
        single => vec![single],
    };
    let opinions = items
        .into_iter()
        .map(|item| opinion_from_value(item).map_err(|e| annotate(e, path)))
        .collect::<Result<_, _>>()?;
    let digest = InputDigest {
        path: path.display().to_string(),
        sha256: sha256_hex(&bytes),
        classes: None,
        total: None,
    };
    Ok((opinions, digest))
}

pub fn opinion_from_value(mut value: Value) -> Result<Opinion, TrustError> {
    if let Some(inner) = value.get_mut("opinion") {
        value = inner.take();
    }
    serde_json::from_value(value).map_err(|e| TrustError::Format(format!("opinion record: {e}")))
}

/// Resolves `path` against `base` unless it is absolute or the builtin.
pub fn resolve(base: &Path, path: &Path) -> PathBuf {
    if path.is_relative() && path != Path::new(BUILTIN_GTSRB) {
        base.join(path)
    } else {
        path.to_path_buf()
    }
}
