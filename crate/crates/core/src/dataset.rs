//! Label distributions of datasets and sub-datasets.
//!
//! Counts are loaded from CSV (`class_id,count`) or JSON
//! (`{"classes": {"<id>": <count>, ...}}`). Schema order is the order in the
//! file. Classes with zero samples stay in the schema.

use std::collections::HashSet;
use std::fmt;
use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::de::{self, MapAccess, Visitor};
use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{Result, TrustError};
use crate::opinion::Opinion;

/// Per-class sample counts over a declared label set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassDistribution {
    schema: Vec<String>,
    counts: Vec<u64>,
}

impl ClassDistribution {
    pub fn new(schema: Vec<String>, counts: Vec<u64>) -> Result<Self> {
        if schema.is_empty() {
            return Err(TrustError::SchemaMismatch(
                "schema must declare at least one class".into(),
            ));
        }
        if schema.len() != counts.len() {
            return Err(TrustError::SchemaMismatch(format!(
                "{} class ids but {} counts",
                schema.len(),
                counts.len()
            )));
        }
        let mut seen = HashSet::with_capacity(schema.len());
        for id in &schema {
            if id.is_empty() {
                return Err(TrustError::Format("empty class id".into()));
            }
            if !seen.insert(id.as_str()) {
                return Err(TrustError::Format(format!("duplicate class id '{id}'")));
            }
        }
        Ok(Self { schema, counts })
    }

    /// Classes named `0..counts.len()`.
    pub fn from_counts(counts: &[u64]) -> Result<Self> {
        let schema = (0..counts.len()).map(|i| i.to_string()).collect();
        Self::new(schema, counts.to_vec())
    }

    pub fn schema(&self) -> &[String] {
        &self.schema
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn num_classes(&self) -> usize {
        self.schema.len()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn count_of(&self, class_id: &str) -> Option<u64> {
        self.index_of(class_id).map(|i| self.counts[i])
    }

    fn index_of(&self, class_id: &str) -> Option<usize> {
        self.schema.iter().position(|id| id == class_id)
    }

    pub fn same_schema(&self, other: &ClassDistribution) -> bool {
        self.schema == other.schema
    }

    /// `p_k = N_k / N` for every class in the schema.
    pub fn class_probabilities(&self) -> Result<ProbabilityVector> {
        let total = self.total();
        if total == 0 {
            return Err(TrustError::EmptyDataset);
        }
        let n = total as f64;
        Ok(ProbabilityVector {
            values: self.counts.iter().map(|&c| c as f64 / n).collect(),
        })
    }

    /// Zeroes the counts of the listed classes; the schema is kept intact.
    pub fn remove_classes<S: AsRef<str>>(&self, class_ids: &[S]) -> Result<ClassDistribution> {
        let mut counts = self.counts.clone();
        for id in class_ids {
            let id = id.as_ref();
            let idx = self
                .index_of(id)
                .ok_or_else(|| TrustError::UnknownClass(id.to_string()))?;
            counts[idx] = 0;
        }
        Ok(ClassDistribution {
            schema: self.schema.clone(),
            counts,
        })
    }

    pub fn load<R: Read>(source: R, format: CountsFormat) -> Result<Self> {
        match format {
            CountsFormat::Csv => load_csv(source),
            CountsFormat::Json => load_json(source),
        }
    }

    pub fn load_path(path: &Path) -> Result<Self> {
        let file =
            fs::File::open(path).map_err(|e| TrustError::Io(format!("{}: {e}", path.display())))?;
        Self::load(file, CountsFormat::from_path(path))
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("class_id,count\n");
        for (id, c) in self.schema.iter().zip(&self.counts) {
            out.push_str(&format!("{id},{c}\n"));
        }
        out
    }

    pub fn to_json(&self) -> String {
        let entries: Vec<String> = self
            .schema
            .iter()
            .zip(&self.counts)
            .map(|(id, c)| format!("{}:{c}", serde_json::Value::String(id.clone())))
            .collect();
        format!("{{\"classes\":{{{}}}}}", entries.join(","))
    }
}

/// Input format of a class-count file.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountsFormat {
    Csv,
    Json,
}

impl CountsFormat {
    /// `.json` files are JSON, everything else CSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("json") => CountsFormat::Json,
            _ => CountsFormat::Csv,
        }
    }
}

fn parse_count(raw: &str, line: usize) -> Result<u64> {
    let value: i64 = raw
        .trim()
        .parse()
        .map_err(|_| TrustError::Format(format!("line {line}: count '{raw}' is not an integer")))?;
    if value < 0 {
        return Err(TrustError::Format(format!(
            "line {line}: negative count {value}"
        )));
    }
    Ok(value as u64)
}

fn load_csv<R: Read>(source: R) -> Result<ClassDistribution> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(source);
    let headers = reader
        .headers()
        .map_err(|e| TrustError::Format(e.to_string()))?
        .clone();
    if headers.len() != 2 || &headers[0] != "class_id" || &headers[1] != "count" {
        return Err(TrustError::Format(format!(
            "expected header 'class_id,count', got '{}'",
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut schema = Vec::new();
    let mut counts = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let line = i + 2;
        let record = record.map_err(|e| TrustError::Format(format!("line {line}: {e}")))?;
        if record.len() != 2 {
            return Err(TrustError::Format(format!(
                "line {line}: expected 2 fields, got {}",
                record.len()
            )));
        }
        schema.push(record[0].to_string());
        counts.push(parse_count(&record[1], line)?);
    }
    if schema.is_empty() {
        return Err(TrustError::EmptyDataset);
    }
    ClassDistribution::new(schema, counts)
}

/// Ordered `class id -> count` entries; duplicate keys are an error.
struct OrderedCounts(Vec<(String, u64)>);

impl<'de> Deserialize<'de> for OrderedCounts {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct EntriesVisitor;

        impl<'de> Visitor<'de> for EntriesVisitor {
            type Value = OrderedCounts;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an object mapping class ids to non-negative integer counts")
            }

            fn visit_map<A: MapAccess<'de>>(
                self,
                mut map: A,
            ) -> std::result::Result<Self::Value, A::Error> {
                let mut entries: Vec<(String, u64)> = Vec::new();
                let mut seen = HashSet::new();
                while let Some((key, value)) = map.next_entry::<String, serde_json::Value>()? {
                    if !seen.insert(key.clone()) {
                        return Err(de::Error::custom(format!("duplicate class id '{key}'")));
                    }
                    let count = match value.as_u64() {
                        Some(c) => c,
                        None if value.as_i64().is_some() => {
                            return Err(de::Error::custom(format!(
                                "negative count {value} for class '{key}'"
                            )))
                        }
                        None => {
                            return Err(de::Error::custom(format!(
                                "count for class '{key}' is not an integer: {value}"
                            )))
                        }
                    };
                    entries.push((key, count));
                }
                Ok(OrderedCounts(entries))
            }
        }

        deserializer.deserialize_map(EntriesVisitor)
    }
}

#[derive(Deserialize)]
struct CountsDocument {
    classes: OrderedCounts,
}

fn load_json<R: Read>(source: R) -> Result<ClassDistribution> {
    let doc: CountsDocument =
        serde_json::from_reader(source).map_err(|e| TrustError::Format(e.to_string()))?;
    if doc.classes.0.is_empty() {
        return Err(TrustError::EmptyDataset);
    }
    let (schema, counts) = doc.classes.0.into_iter().unzip();
    ClassDistribution::new(schema, counts)
}

/// Per-class probabilities aligned with a distribution's schema.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbabilityVector {
    values: Vec<f64>,
}

impl ProbabilityVector {
    /// Validates entries in `[0, 1]` summing to one within `1e-9`.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(TrustError::Parameter("probability vector is empty".into()));
        }
        if values.iter().any(|p| !(0.0..=1.0).contains(p)) {
            return Err(TrustError::Parameter(
                "probabilities must lie in [0, 1]".into(),
            ));
        }
        let sum: f64 = values.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(TrustError::Parameter(format!(
                "probabilities sum to {sum}, expected 1"
            )));
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// How a distribution is partitioned across sub-datasets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SplitMode {
    /// Per class, counts differ by at most one between parts.
    #[default]
    Stratified,
    /// Every sample lands in a uniformly drawn part.
    Random,
}

pub fn split(
    d: &ClassDistribution,
    n_parts: usize,
    seed: u64,
    mode: SplitMode,
) -> Result<Vec<ClassDistribution>> {
    match mode {
        SplitMode::Stratified => split_stratified(d, n_parts, seed),
        SplitMode::Random => split_random(d, n_parts, seed),
    }
}

/// Near-equal per-class split; which parts receive the remainder is drawn
/// from a seeded generator.
pub fn split_stratified(
    d: &ClassDistribution,
    n_parts: usize,
    seed: u64,
) -> Result<Vec<ClassDistribution>> {
    if n_parts == 0 {
        return Err(TrustError::Parameter("n_parts must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut parts = vec![vec![0u64; d.num_classes()]; n_parts];
    for (k, &count) in d.counts.iter().enumerate() {
        let base = count / n_parts as u64;
        let remainder = (count % n_parts as u64) as usize;
        for part in parts.iter_mut() {
            part[k] = base;
        }
        for idx in index::sample(&mut rng, n_parts, remainder) {
            parts[idx][k] += 1;
        }
    }
    Ok(parts
        .into_iter()
        .map(|counts| ClassDistribution {
            schema: d.schema.clone(),
            counts,
        })
        .collect())
}

pub fn split_random(
    d: &ClassDistribution,
    n_parts: usize,
    seed: u64,
) -> Result<Vec<ClassDistribution>> {
    if n_parts == 0 {
        return Err(TrustError::Parameter("n_parts must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut parts = vec![vec![0u64; d.num_classes()]; n_parts];
    for (k, &count) in d.counts.iter().enumerate() {
        for _ in 0..count {
            parts[rng.gen_range(0..n_parts)][k] += 1;
        }
    }
    Ok(parts
        .into_iter()
        .map(|counts| ClassDistribution {
            schema: d.schema.clone(),
            counts,
        })
        .collect())
}

/// Sums per-class counts across parts sharing one schema.
pub fn merge(parts: &[ClassDistribution]) -> Result<ClassDistribution> {
    let first = parts
        .first()
        .ok_or_else(|| TrustError::SchemaMismatch("nothing to merge".into()))?;
    let mut counts = vec![0u64; first.num_classes()];
    for (i, part) in parts.iter().enumerate() {
        if !part.same_schema(first) {
            return Err(TrustError::SchemaMismatch(format!(
                "part #{i} declares a different class schema"
            )));
        }
        for (acc, c) in counts.iter_mut().zip(&part.counts) {
            *acc += c;
        }
    }
    Ok(ClassDistribution {
        schema: first.schema.clone(),
        counts,
    })
}

/// One entry of a sub-dataset manifest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestSource {
    pub name: String,
    pub path: PathBuf,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub referral_trust: Option<Opinion>,
}

/// `{"sources": [{"name", "path", "referral_trust"?}, ...]}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub sources: Vec<ManifestSource>,
}

impl Manifest {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| TrustError::Format(format!("manifest: {e}")))
    }

    /// Reads a manifest; relative source paths resolve against its directory.
    pub fn load_path(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| TrustError::Io(format!("{}: {e}", path.display())))?;
        let mut manifest = Self::from_json(&text)?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        for src in &mut manifest.sources {
            if src.path.is_relative() {
                src.path = base.join(&src.path);
            }
        }
        Ok(manifest)
    }

    pub fn load_distributions(&self) -> Result<Vec<ClassDistribution>> {
        self.sources
            .iter()
            .map(|s| ClassDistribution::load_path(&s.path))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn load_csv_example() {
        let text = "class_id,count\n0,100\n1,100\n2,1000\n3,1000\n4,1000\n5,2000";
        let d = ClassDistribution::load(text.as_bytes(), CountsFormat::Csv).unwrap();
        assert_eq!(d.num_classes(), 6);
        assert_eq!(d.total(), 5200);
    }

    #[test]
    fn load_csv_errors() {
        let neg = "class_id,count\n0,100\n2,-5\n";
        assert!(matches!(
            ClassDistribution::load(neg.as_bytes(), CountsFormat::Csv),
            Err(TrustError::Format(_))
        ));
        let dup = "class_id,count\n0,1\n0,2\n";
        assert!(matches!(
            ClassDistribution::load(dup.as_bytes(), CountsFormat::Csv),
            Err(TrustError::Format(_))
        ));
        let header = "label,n\n0,1\n";
        assert!(ClassDistribution::load(header.as_bytes(), CountsFormat::Csv).is_err());
        let frac = "class_id,count\n0,1.5\n";
        assert!(ClassDistribution::load(frac.as_bytes(), CountsFormat::Csv).is_err());
        let short = "class_id,count\n0\n";
        assert!(ClassDistribution::load(short.as_bytes(), CountsFormat::Csv).is_err());
        assert_eq!(
            ClassDistribution::load("class_id,count\n".as_bytes(), CountsFormat::Csv),
            Err(TrustError::EmptyDataset)
        );
    }

    #[test]
    fn load_json_example() {
        let text = r#"{"classes":{"0":857,"1":857,"2":867,"3":867,"4":876,"5":876}}"#;
        let d = ClassDistribution::load(text.as_bytes(), CountsFormat::Json).unwrap();
        assert_eq!(d.total(), 5200);
        assert_eq!(d.schema()[5], "5");

        let ordered = r#"{"classes":{"b":1,"a":2}}"#;
        let d = ClassDistribution::load(ordered.as_bytes(), CountsFormat::Json).unwrap();
        assert_eq!(d.schema(), ["b", "a"]);
    }

    #[test]
    fn load_json_errors() {
        for bad in [
            r#"{"classes":{"0":1,"0":2}}"#,
            r#"{"classes":{"0":-3}}"#,
            r#"{"classes":{"0":1.5}}"#,
            r#"{"classes":[1,2]}"#,
            r#"{"counts":{"0":1}}"#,
        ] {
            assert!(
                matches!(
                    ClassDistribution::load(bad.as_bytes(), CountsFormat::Json),
                    Err(TrustError::Format(_))
                ),
                "{bad}"
            );
        }
    }

    #[test]
    fn json_writer_roundtrip() {
        let d = ClassDistribution::new(vec!["x\"y".into(), "z".into()], vec![3, 0]).unwrap();
        let back = ClassDistribution::load(d.to_json().as_bytes(), CountsFormat::Json).unwrap();
        assert_eq!(back, d);
        let back = ClassDistribution::load(
            ClassDistribution::from_counts(&[1, 2])
                .unwrap()
                .to_csv()
                .as_bytes(),
            CountsFormat::Csv,
        )
        .unwrap();
        assert_eq!(back.counts(), [1, 2]);
    }

    #[test]
    fn probabilities() {
        let d = ClassDistribution::from_counts(&[100, 100, 1000, 1000, 1000, 2000]).unwrap();
        let p = d.class_probabilities().unwrap();
        let expected = [0.019231, 0.019231, 0.192308, 0.192308, 0.192308, 0.384615];
        for (a, b) in p.values().iter().zip(expected) {
            assert_abs_diff_eq!(*a, b, epsilon = 5e-7);
        }
        let d = ClassDistribution::from_counts(&[857, 857, 867, 867, 876, 876]).unwrap();
        let p = d.class_probabilities().unwrap();
        let expected = [0.16481, 0.16481, 0.16673, 0.16673, 0.16846, 0.16846];
        for (a, b) in p.values().iter().zip(expected) {
            assert_abs_diff_eq!(*a, b, epsilon = 5e-6);
        }
        let uniform = ClassDistribution::from_counts(&[7; 43]).unwrap();
        assert!(uniform
            .class_probabilities()
            .unwrap()
            .values()
            .iter()
            .all(|&p| p == 1.0 / 43.0));
        let empty = ClassDistribution::from_counts(&[0, 0]).unwrap();
        assert_eq!(empty.class_probabilities(), Err(TrustError::EmptyDataset));
    }

    #[test]
    fn stratified_split() {
        let d = ClassDistribution::from_counts(&[100; 43]).unwrap();
        let parts = split_stratified(&d, 100, 3).unwrap();
        assert_eq!(parts.len(), 100);
        assert!(parts.iter().all(|p| p.counts().iter().all(|&c| c == 1)));

        let d = ClassDistribution::from_counts(&[210, 2220, 7, 0]).unwrap();
        let a = split_stratified(&d, 13, 42).unwrap();
        assert_eq!(a, split_stratified(&d, 13, 42).unwrap());
        assert_eq!(merge(&a).unwrap(), d);
        for k in 0..d.num_classes() {
            let column: Vec<u64> = a.iter().map(|p| p.counts()[k]).collect();
            assert!(column.iter().max().unwrap() - column.iter().min().unwrap() <= 1);
        }
        assert!(split_stratified(&d, 0, 1).is_err());
    }

    #[test]
    fn random_split_partitions() {
        let d = ClassDistribution::from_counts(&[210, 2220, 7, 0]).unwrap();
        let parts = split_random(&d, 10, 9).unwrap();
        assert_eq!(merge(&parts).unwrap(), d);
        assert_eq!(parts, split(&d, 10, 9, SplitMode::Random).unwrap());
    }

    #[test]
    fn class_removal() {
        let d = ClassDistribution::from_counts(&[5, 6, 7]).unwrap();
        assert_eq!(d.remove_classes::<&str>(&[]).unwrap(), d);
        let all = d.remove_classes(&["0", "1", "2"]).unwrap();
        assert_eq!(all.total(), 0);
        assert_eq!(all.num_classes(), 3);
        assert_eq!(
            d.remove_classes(&["9"]),
            Err(TrustError::UnknownClass("9".into()))
        );
    }

    #[test]
    fn merging() {
        let d = ClassDistribution::from_counts(&[5, 6]).unwrap();
        assert_eq!(merge(std::slice::from_ref(&d)).unwrap(), d);
        let a = ClassDistribution::new(vec!["c".into()], vec![3]).unwrap();
        let b = ClassDistribution::new(vec!["c".into()], vec![4]).unwrap();
        assert_eq!(merge(&[a.clone(), b]).unwrap().counts(), [7]);
        let other = ClassDistribution::new(vec!["d".into()], vec![4]).unwrap();
        assert!(matches!(
            merge(&[a, other]),
            Err(TrustError::SchemaMismatch(_))
        ));
        assert!(merge(&[]).is_err());
    }

    #[test]
    fn manifest_parsing() {
        let text = r#"{"sources":[{"name":"oem-1","path":"a.csv"},
            {"name":"oem-2","path":"b.json","referral_trust":{"belief":0.5,"disbelief":0.3,"uncertainty":0.2,"base_rate":0.5}}]}"#;
        let m = Manifest::from_json(text).unwrap();
        assert_eq!(m.sources.len(), 2);
        assert!(m.sources[0].referral_trust.is_none());
        assert_abs_diff_eq!(m.sources[1].referral_trust.unwrap().belief(), 0.5);
        assert!(Manifest::from_json(r#"{"sources":[{"name":"x"}]}"#).is_err());
    }
}
