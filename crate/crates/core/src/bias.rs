//! Dataset-bias assessment.
//!
//! Method 1 counts the classes whose probability falls in a tolerance zone
//! around `1/n_c` and fixes the opinion's uncertainty from the dataset size
//! relative to a theoretical sample complexity. Method 2 compares the label
//! entropy of each sub-dataset against the entropy of an edge-acceptable
//! distribution and counts the outcomes as positive or negative evidence.

use serde::{Deserialize, Serialize};

use crate::dataset::{ClassDistribution, ProbabilityVector};
use crate::error::{Result, TrustError};
use crate::opinion::{Evidence, Opinion};
use crate::quantify::{quantify_baseline, quantify_constant_u, quantify_weighted, QuantConfig};

/// Slack on the tolerance-zone edges so that probabilities lying exactly on
/// an edge are not lost to rounding in `1/n_c ± η`.
const EDGE_EPS: f64 = 1e-12;

/// Parameters of both bias methods.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BiasConfig {
    /// Width of the tolerance zone below `1/n_c`.
    pub eta1: f64,
    /// Width of the tolerance zone above `1/n_c`.
    pub eta2: f64,
    pub prior_weight: f64,
    pub base_rate: f64,
    /// Lower clamp `m1` of the dataset uncertainty.
    pub min_uncertainty: f64,
    /// Upper clamp `m2` of the dataset uncertainty.
    pub max_uncertainty: f64,
    pub vc_dimension: f64,
    pub epsilon: f64,
    pub delta: f64,
    pub uncertainty_log_base: f64,
    pub entropy_log_base: f64,
    /// Decay scale `τ` of the evidence-weighted Method 2 extension.
    /// Defaults to `0.1·log(n_c)` in the entropy base.
    pub evidence_weight_scale: Option<f64>,
    /// Pins Method 1's uncertainty instead of deriving it from sample
    /// complexity.
    pub fixed_uncertainty: Option<f64>,
}

impl Default for BiasConfig {
    fn default() -> Self {
        Self {
            eta1: 0.02,
            eta2: 0.02,
            prior_weight: 2.0,
            base_rate: 0.5,
            min_uncertainty: 0.0,
            max_uncertainty: 1.0,
            vc_dimension: 1000.0,
            epsilon: 0.1,
            delta: 0.05,
            uncertainty_log_base: 10.0,
            entropy_log_base: std::f64::consts::E,
            evidence_weight_scale: None,
            fixed_uncertainty: None,
        }
    }
}

fn positive_finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(TrustError::Parameter(format!(
            "{name} must be positive, got {v}"
        )))
    }
}

fn log_base_ok(name: &str, v: f64) -> Result<()> {
    positive_finite(name, v)?;
    if v == 1.0 {
        return Err(TrustError::Parameter(format!("{name} must not be 1")));
    }
    Ok(())
}

impl BiasConfig {
    /// Symmetric zone `η1 = η2 = eta`.
    pub fn with_eta(mut self, eta: f64) -> Self {
        self.eta1 = eta;
        self.eta2 = eta;
        self
    }

    pub fn quant_config(&self) -> QuantConfig {
        QuantConfig {
            prior_weight: self.prior_weight,
            base_rate: self.base_rate,
        }
    }

    /// Half-width of the edge-acceptable distribution used by Method 2.
    pub fn threshold_eta(&self) -> f64 {
        (self.eta1 + self.eta2) / 2.0
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("eta1", self.eta1), ("eta2", self.eta2)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(TrustError::Parameter(format!(
                    "{name} must be non-negative, got {v}"
                )));
            }
        }
        self.quant_config().validate()?;
        let (m1, m2) = (self.min_uncertainty, self.max_uncertainty);
        if !(0.0 <= m1 && m1 <= m2 && m2 <= 1.0) {
            return Err(TrustError::Parameter(format!(
                "uncertainty bounds must satisfy 0 <= m1 <= m2 <= 1, got m1={m1}, m2={m2}"
            )));
        }
        self.check_sample_complexity_params()?;
        log_base_ok("uncertainty_log_base", self.uncertainty_log_base)?;
        log_base_ok("entropy_log_base", self.entropy_log_base)?;
        if let Some(tau) = self.evidence_weight_scale {
            positive_finite("evidence_weight_scale", tau)?;
        }
        if let Some(u) = self.fixed_uncertainty {
            if !(0.0..=1.0).contains(&u) {
                return Err(TrustError::Parameter(format!(
                    "fixed_uncertainty must lie in [0, 1], got {u}"
                )));
            }
        }
        Ok(())
    }

    fn check_sample_complexity_params(&self) -> Result<()> {
        positive_finite("vc_dimension", self.vc_dimension)?;
        for (name, v) in [("epsilon", self.epsilon), ("delta", self.delta)] {
            if !(v > 0.0 && v < 1.0) {
                return Err(TrustError::Parameter(format!(
                    "{name} must lie in (0, 1), got {v}"
                )));
            }
        }
        Ok(())
    }
}

/// Method 1 evidence: how many classes sit inside the tolerance zone.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ToleranceEvidence {
    pub in_zone: usize,
    pub classes: usize,
    pub r_frac: f64,
    pub s_frac: f64,
    pub zone_lower: f64,
    pub zone_upper: f64,
}

/// Counts classes with `1/n_c − η1 ≤ p_k ≤ 1/n_c + η2`. The lower edge is
/// clamped at zero; both edges are inclusive.
pub fn tolerance_evidence_with(p: &ProbabilityVector, eta1: f64, eta2: f64) -> ToleranceEvidence {
    let classes = p.len();
    let expected = 1.0 / classes as f64;
    let lower = (expected - eta1).max(0.0);
    let upper = expected + eta2;
    let in_zone = p
        .values()
        .iter()
        .filter(|&&pk| pk >= lower - EDGE_EPS && pk <= upper + EDGE_EPS)
        .count();
    let r_frac = in_zone as f64 / classes as f64;
    ToleranceEvidence {
        in_zone,
        classes,
        r_frac,
        s_frac: 1.0 - r_frac,
        zone_lower: lower,
        zone_upper: upper,
    }
}

pub fn tolerance_evidence(p: &ProbabilityVector, cfg: &BiasConfig) -> ToleranceEvidence {
    tolerance_evidence_with(p, cfg.eta1, cfg.eta2)
}

/// `N_s = (d/ε)·ln(1/δ)`.
pub fn sample_complexity(cfg: &BiasConfig) -> Result<f64> {
    cfg.check_sample_complexity_params()?;
    Ok(cfg.vc_dimension / cfg.epsilon * (1.0 / cfg.delta).ln())
}

/// `U = clamp((log N_s − log N)/10, m1, m2)`.
pub fn dataset_uncertainty(
    sample_complexity: f64,
    dataset_size: u64,
    cfg: &BiasConfig,
) -> Result<f64> {
    if dataset_size == 0 {
        return Err(TrustError::EmptyDataset);
    }
    positive_finite("sample complexity", sample_complexity)?;
    let base = cfg.uncertainty_log_base;
    let deficit = (sample_complexity.log(base) - (dataset_size as f64).log(base)) / 10.0;
    Ok(deficit.max(cfg.min_uncertainty).min(cfg.max_uncertainty))
}

/// Everything Method 1 derived on its way to the opinion.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Method1Report {
    pub dataset_size: u64,
    pub tolerance: ToleranceEvidence,
    /// `None` when the uncertainty was pinned by configuration.
    pub sample_complexity: Option<f64>,
    pub uncertainty: f64,
    pub opinion: Opinion,
}

fn method1_uncertainty(dataset_size: u64, cfg: &BiasConfig) -> Result<(Option<f64>, f64)> {
    match cfg.fixed_uncertainty {
        Some(u) => Ok((None, u)),
        None => {
            let n_s = sample_complexity(cfg)?;
            Ok((Some(n_s), dataset_uncertainty(n_s, dataset_size, cfg)?))
        }
    }
}

/// Class-probability tolerance-zone assessment with constant uncertainty.
pub fn assess_bias_method1(d: &ClassDistribution, cfg: &BiasConfig) -> Result<Method1Report> {
    cfg.validate()?;
    let probabilities = d.class_probabilities()?;
    let tolerance = tolerance_evidence(&probabilities, cfg);
    let (sample_complexity, uncertainty) = method1_uncertainty(d.total(), cfg)?;
    let opinion = quantify_constant_u(
        tolerance.r_frac,
        tolerance.s_frac,
        uncertainty,
        &cfg.quant_config(),
    )?;
    Ok(Method1Report {
        dataset_size: d.total(),
        tolerance,
        sample_complexity,
        uncertainty,
        opinion,
    })
}

/// Shannon entropy `−Σ p_k log p_k` with `0·log 0 = 0`.
pub fn entropy(p: &ProbabilityVector, base: f64) -> f64 {
    let nats: f64 = p
        .values()
        .iter()
        .filter(|&&pk| pk > 0.0)
        .map(|&pk| -pk * pk.ln())
        .sum();
    (nats / base.ln()).max(0.0)
}

/// The Method 2 threshold and the distribution it was computed from.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntropyThreshold {
    pub threshold: f64,
    pub edge_distribution: ProbabilityVector,
}

/// Entropy of the edge-acceptable distribution: half the classes at
/// `1/n_c + η`, half at `1/n_c − η`, and one at `1/n_c` when `n_c` is odd.
pub fn entropy_threshold(classes: usize, eta: f64, base: f64) -> Result<EntropyThreshold> {
    if classes < 2 {
        return Err(TrustError::Parameter(format!(
            "entropy threshold needs at least 2 classes, got {classes}"
        )));
    }
    log_base_ok("entropy log base", base)?;
    let expected = 1.0 / classes as f64;
    let max = expected.min(1.0 - expected);
    if !(eta.is_finite() && eta >= 0.0 && eta <= max + EDGE_EPS) {
        return Err(TrustError::EtaOutOfRange { eta, classes, max });
    }
    let half = classes / 2;
    let mut values = Vec::with_capacity(classes);
    values.extend(std::iter::repeat_n((expected + eta).min(1.0), half));
    values.extend(std::iter::repeat_n((expected - eta).max(0.0), half));
    if classes % 2 == 1 {
        values.push(expected);
    }
    let edge_distribution = ProbabilityVector::new(values)?;
    Ok(EntropyThreshold {
        threshold: entropy(&edge_distribution, base),
        edge_distribution,
    })
}

/// Outcome of comparing one sub-dataset's entropy with the threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntropyVerdict {
    pub entropy: f64,
    pub threshold: f64,
    /// Strictly above the threshold.
    pub positive: bool,
    pub margin: f64,
}

impl EntropyVerdict {
    pub fn new(entropy: f64, threshold: f64) -> Self {
        Self {
            entropy,
            threshold,
            positive: entropy > threshold,
            margin: entropy - threshold,
        }
    }
}

/// How Method 2 turns verdicts into an opinion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method2Mode {
    /// Counts feed the baseline-prior model.
    #[default]
    Baseline,
    /// Each part also contributes an uncertainty weight that decays with
    /// its distance from the threshold.
    EvidenceWeighted,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Method2Report {
    pub mode: Method2Mode,
    pub threshold: f64,
    pub threshold_eta: f64,
    pub verdicts: Vec<EntropyVerdict>,
    pub part_sizes: Vec<u64>,
    pub positive: usize,
    pub negative: usize,
    /// Total uncertainty weight (evidence-weighted mode only).
    pub uncertainty_weight: Option<f64>,
    pub opinion: Opinion,
}

/// Entropy-threshold assessment over sub-datasets.
pub fn assess_bias_method2(
    parts: &[ClassDistribution],
    cfg: &BiasConfig,
    mode: Method2Mode,
) -> Result<Method2Report> {
    cfg.validate()?;
    let first = parts
        .first()
        .ok_or_else(|| TrustError::Parameter("Method 2 needs at least one sub-dataset".into()))?;
    let classes = first.num_classes();
    let base = cfg.entropy_log_base;
    let eta = cfg.threshold_eta();
    let threshold = entropy_threshold(classes, eta, base)?.threshold;

    let mut verdicts = Vec::with_capacity(parts.len());
    for (index, part) in parts.iter().enumerate() {
        if !part.same_schema(first) {
            return Err(TrustError::SchemaMismatch(format!(
                "sub-dataset #{index} declares a different class schema"
            )));
        }
        let probabilities = match part.class_probabilities() {
            Ok(p) => p,
            Err(TrustError::EmptyDataset) => return Err(TrustError::EmptyPart { index }),
            Err(e) => return Err(e),
        };
        verdicts.push(EntropyVerdict::new(
            entropy(&probabilities, base),
            threshold,
        ));
    }

    let positive = verdicts.iter().filter(|v| v.positive).count();
    let negative = verdicts.len() - positive;
    let quant = cfg.quant_config();
    let (uncertainty_weight, opinion) = match mode {
        Method2Mode::Baseline => {
            let evidence = Evidence::new(positive as f64, negative as f64)?;
            (None, quantify_baseline(&evidence, &quant))
        }
        Method2Mode::EvidenceWeighted => {
            let tau = cfg
                .evidence_weight_scale
                .unwrap_or_else(|| 0.1 * (classes as f64).log(base));
            let weight: f64 = verdicts.iter().map(|v| (-v.margin.abs() / tau).exp()).sum();
            let weight = weight.max(f64::MIN_POSITIVE);
            let evidence = Evidence::with_weight(positive as f64, negative as f64, weight)?;
            (Some(weight), quantify_weighted(&evidence, &quant)?)
        }
    };

    Ok(Method2Report {
        mode,
        threshold,
        threshold_eta: eta,
        verdicts,
        part_sizes: parts.iter().map(ClassDistribution::total).collect(),
        positive,
        negative,
        uncertainty_weight,
        opinion,
    })
}

/// One point of an η sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EtaPoint {
    pub eta: f64,
    pub in_zone: usize,
    pub opinion: Opinion,
}

/// Method 1 with a symmetric zone for every `η` in `etas`, in input order.
pub fn sweep_eta(d: &ClassDistribution, etas: &[f64], cfg: &BiasConfig) -> Result<Vec<EtaPoint>> {
    if let Some(&bad) = etas.iter().find(|e| !(e.is_finite() && **e >= 0.0)) {
        return Err(TrustError::Parameter(format!(
            "eta must be non-negative, got {bad}"
        )));
    }
    etas.iter()
        .map(|&eta| {
            let report = assess_bias_method1(d, &cfg.clone().with_eta(eta))?;
            Ok(EtaPoint {
                eta,
                in_zone: report.tolerance.in_zone,
                opinion: report.opinion,
            })
        })
        .collect()
}
