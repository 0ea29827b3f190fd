//! Evidence-to-opinion quantification models.

use serde::{Deserialize, Serialize};

use crate::error::{Result, TrustError};
use crate::opinion::{Evidence, Opinion};

/// Prior weight and base rate shared by the quantification models.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuantConfig {
    pub prior_weight: f64,
    pub base_rate: f64,
}

impl Default for QuantConfig {
    fn default() -> Self {
        Self {
            prior_weight: 2.0,
            base_rate: 0.5,
        }
    }
}

impl QuantConfig {
    pub fn new(prior_weight: f64, base_rate: f64) -> Result<Self> {
        let cfg = Self {
            prior_weight,
            base_rate,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.prior_weight.is_finite() && self.prior_weight > 0.0) {
            return Err(TrustError::Parameter(format!(
                "prior_weight must be positive, got {}",
                self.prior_weight
            )));
        }
        if !(0.0..=1.0).contains(&self.base_rate) {
            return Err(TrustError::Parameter(format!(
                "base_rate must lie in [0, 1], got {}",
                self.base_rate
            )));
        }
        Ok(())
    }
}

fn weighted_opinion(positive: f64, negative: f64, weight: f64, base_rate: f64) -> Opinion {
    let total = weight + positive + negative;
    Opinion::from_computed(
        positive / total,
        negative / total,
        weight / total,
        base_rate,
    )
}

/// Baseline-prior model: `b = r/(W+r+s)`, `d = s/(W+r+s)`, `u = W/(W+r+s)`.
pub fn quantify_baseline(evidence: &Evidence, cfg: &QuantConfig) -> Opinion {
    weighted_opinion(
        evidence.positive(),
        evidence.negative(),
        cfg.prior_weight,
        cfg.base_rate,
    )
}

/// Evidence-weighted model: the evidence carries its own uncertainty weight
/// in place of the prior weight.
pub fn quantify_weighted(evidence: &Evidence, cfg: &QuantConfig) -> Result<Opinion> {
    let weight = evidence.weight().ok_or(TrustError::MissingWeight)?;
    Ok(weighted_opinion(
        evidence.positive(),
        evidence.negative(),
        weight,
        cfg.base_rate,
    ))
}

/// Constant-uncertainty model: uncertainty is fixed at `uncertainty`, belief
/// and disbelief share the remaining mass in proportion to the evidence.
pub fn quantify_constant_u(
    r_frac: f64,
    s_frac: f64,
    uncertainty: f64,
    cfg: &QuantConfig,
) -> Result<Opinion> {
    if !(r_frac.is_finite() && s_frac.is_finite() && r_frac >= 0.0 && s_frac >= 0.0) {
        return Err(TrustError::InvalidEvidence(format!(
            "evidence fractions must be non-negative, got r={r_frac}, s={s_frac}"
        )));
    }
    if !(0.0..=1.0).contains(&uncertainty) {
        return Err(TrustError::Parameter(format!(
            "uncertainty must lie in [0, 1], got {uncertainty}"
        )));
    }
    let total = r_frac + s_frac;
    if total <= 0.0 {
        return Err(TrustError::NoEvidence);
    }
    let gamma = (1.0 - uncertainty) / total;
    Ok(Opinion::from_computed(
        gamma * r_frac,
        gamma * s_frac,
        uncertainty,
        cfg.base_rate,
    ))
}
