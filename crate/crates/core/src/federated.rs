//! Federated imbalance sweep.
//!
//! A base distribution is split across `n` contributors (OEMs). For each `k`
//! the first `k` parts lose the configured classes; Method 2 runs over the
//! parts and Method 1 over their concatenation.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::bias::{assess_bias_method1, assess_bias_method2, BiasConfig, Method2Mode};
use crate::dataset::{merge, split, ClassDistribution, SplitMode};
use crate::error::{Result, TrustError};
use crate::opinion::Opinion;

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub base_distribution: ClassDistribution,
    pub n_oems: usize,
    pub imbalance_class_ids: Vec<String>,
    /// Ascending, each in `0..=n_oems`.
    pub k_values: Vec<usize>,
    pub seed: u64,
    pub split_mode: SplitMode,
    pub method2_mode: Method2Mode,
    pub bias_config: BiasConfig,
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_oems == 0 {
            return Err(TrustError::Parameter("n_oems must be at least 1".into()));
        }
        if self.k_values.windows(2).any(|w| w[0] > w[1]) {
            return Err(TrustError::Parameter(
                "k_values must be sorted ascending".into(),
            ));
        }
        if let Some(&k) = self.k_values.iter().find(|&&k| k > self.n_oems) {
            return Err(TrustError::Parameter(format!(
                "k = {k} exceeds the number of OEMs ({})",
                self.n_oems
            )));
        }
        if let Some(id) = self
            .imbalance_class_ids
            .iter()
            .find(|id| self.base_distribution.count_of(id).is_none())
        {
            return Err(TrustError::UnknownClass(id.clone()));
        }
        self.bias_config.validate()
    }
}

/// Both methods' opinions for one value of `k`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepPoint {
    pub k: usize,
    pub method1: Opinion,
    pub method2: Opinion,
    /// Size of the concatenated dataset.
    pub merged_total: u64,
    /// Size of every contributed part.
    pub part_totals: Vec<u64>,
}

/// Runs the sweep. The split is drawn once from `seed`, so every `k` sees
/// the same partition and imbalanced parts are nested as `k` grows.
pub fn run_sweep(cfg: &SimConfig) -> Result<Vec<SweepPoint>> {
    cfg.validate()?;
    let parts = split(&cfg.base_distribution, cfg.n_oems, cfg.seed, cfg.split_mode)?;
    let imbalanced: Vec<ClassDistribution> = parts
        .iter()
        .map(|p| p.remove_classes(&cfg.imbalance_class_ids))
        .collect::<Result<_>>()?;

    cfg.k_values
        .iter()
        .map(|&k| {
            let current: Vec<ClassDistribution> =
                imbalanced[..k].iter().chain(&parts[k..]).cloned().collect();
            let method2 = assess_bias_method2(&current, &cfg.bias_config, cfg.method2_mode)?;
            let merged = merge(&current)?;
            let method1 = assess_bias_method1(&merged, &cfg.bias_config)?;
            Ok(SweepPoint {
                k,
                method1: method1.opinion,
                method2: method2.opinion,
                merged_total: merged.total(),
                part_totals: method2.part_sizes,
            })
        })
        .collect()
}

pub const SWEEP_CSV_HEADER: &str = "k,method,belief,disbelief,uncertainty,n_total";

/// One row per `(k, method)`, methods in order 1, 2.
pub fn sweep_to_csv(points: &[SweepPoint]) -> String {
    let mut out = String::with_capacity(64 * points.len() * 2 + 64);
    out.push_str(SWEEP_CSV_HEADER);
    out.push('\n');
    for p in points {
        for (method, op) in [(1, &p.method1), (2, &p.method2)] {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                p.k,
                method,
                op.belief(),
                op.disbelief(),
                op.uncertainty(),
                p.merged_total
            );
        }
    }
    out
}

/// A parsed sweep CSV row.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub k: usize,
    pub method: u8,
    pub belief: f64,
    pub disbelief: f64,
    pub uncertainty: f64,
    pub n_total: u64,
}

pub fn parse_sweep_csv(text: &str) -> Result<Vec<SweepRow>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header = reader
        .headers()
        .map_err(|e| TrustError::Format(e.to_string()))?
        .iter()
        .collect::<Vec<_>>()
        .join(",");
    if header != SWEEP_CSV_HEADER {
        return Err(TrustError::Format(format!(
            "expected sweep header '{SWEEP_CSV_HEADER}', got '{header}'"
        )));
    }
    reader
        .deserialize()
        .enumerate()
        .map(|(i, row)| row.map_err(|e| TrustError::Format(format!("row {}: {e}", i + 2))))
        .collect()
}
