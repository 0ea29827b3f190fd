//! Binomial opinions and the Subjective Logic operator algebra.
//!
//! An [`Opinion`] is a quadruple `(belief, disbelief, uncertainty, base_rate)`
//! with the first three components summing to one. All operators are pure and
//! return freshly validated values.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Result, TrustError};

/// Tolerance on `b + d + u = 1` when an opinion is constructed.
pub const SUM_TOLERANCE: f64 = 1e-9;

/// Base rates closer than this are treated as equal by the fusion operators.
pub const BASE_RATE_TOLERANCE: f64 = 1e-9;

/// A binomial opinion about a binary proposition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "OpinionRecord")]
pub struct Opinion {
    belief: f64,
    disbelief: f64,
    uncertainty: f64,
    base_rate: f64,
}

/// Unvalidated wire form of an opinion.
#[derive(Debug, Clone, Copy, Deserialize)]
struct OpinionRecord {
    belief: f64,
    disbelief: f64,
    uncertainty: f64,
    base_rate: f64,
}

impl TryFrom<OpinionRecord> for Opinion {
    type Error = TrustError;

    fn try_from(rec: OpinionRecord) -> Result<Self> {
        Opinion::new(rec.belief, rec.disbelief, rec.uncertainty, rec.base_rate)
    }
}

fn check_fraction(name: &str, value: f64) -> Result<()> {
    if !value.is_finite() {
        return Err(TrustError::Validation(format!("{name} is not finite")));
    }
    if !(0.0..=1.0).contains(&value) {
        return Err(TrustError::Validation(format!(
            "{name} = {value} outside [0, 1]"
        )));
    }
    Ok(())
}

impl Opinion {
    /// Builds a validated opinion.
    pub fn new(belief: f64, disbelief: f64, uncertainty: f64, base_rate: f64) -> Result<Self> {
        check_fraction("belief", belief)?;
        check_fraction("disbelief", disbelief)?;
        check_fraction("uncertainty", uncertainty)?;
        check_fraction("base_rate", base_rate)?;
        let sum = belief + disbelief + uncertainty;
        if (sum - 1.0).abs() > SUM_TOLERANCE {
            return Err(TrustError::Validation(format!(
                "belief + disbelief + uncertainty = {sum}, expected 1"
            )));
        }
        Ok(Self {
            belief,
            disbelief,
            uncertainty,
            base_rate,
        })
    }

    /// Operator results: clamps rounding noise back into `[0, 1]`.
    pub(crate) fn from_computed(
        belief: f64,
        disbelief: f64,
        uncertainty: f64,
        base_rate: f64,
    ) -> Self {
        let clamp = |v: f64| v.clamp(0.0, 1.0);
        let op = Self {
            belief: clamp(belief),
            disbelief: clamp(disbelief),
            uncertainty: clamp(uncertainty),
            base_rate: clamp(base_rate),
        };
        debug_assert!(
            (op.belief + op.disbelief + op.uncertainty - 1.0).abs() < 1e-6,
            "operator produced an invalid opinion: {op:?}"
        );
        op
    }

    /// The opinion with no evidence at all.
    pub fn vacuous(base_rate: f64) -> Result<Self> {
        Self::new(0.0, 0.0, 1.0, base_rate)
    }

    /// An opinion without uncertainty, equivalent to a probability.
    pub fn dogmatic(belief: f64, base_rate: f64) -> Result<Self> {
        check_fraction("belief", belief)?;
        Self::new(belief, 1.0 - belief, 0.0, base_rate)
    }

    pub fn belief(&self) -> f64 {
        self.belief
    }

    pub fn disbelief(&self) -> f64 {
        self.disbelief
    }

    pub fn uncertainty(&self) -> f64 {
        self.uncertainty
    }

    pub fn base_rate(&self) -> f64 {
        self.base_rate
    }

    pub fn is_vacuous(&self) -> bool {
        self.uncertainty >= 1.0
    }

    pub fn is_dogmatic(&self) -> bool {
        self.uncertainty <= 0.0
    }

    /// Projected probability `b + a·u`.
    pub fn projected_probability(&self) -> f64 {
        (self.belief + self.base_rate * self.uncertainty).clamp(0.0, 1.0)
    }

    /// Component-wise distance, used by tests and tolerance checks.
    pub fn max_abs_diff(&self, other: &Opinion) -> f64 {
        [
            (self.belief - other.belief).abs(),
            (self.disbelief - other.disbelief).abs(),
            (self.uncertainty - other.uncertainty).abs(),
            (self.base_rate - other.base_rate).abs(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    /// Negation swaps belief and disbelief and complements the base rate.
    pub fn negate(&self) -> Opinion {
        Opinion::from_computed(
            self.disbelief,
            self.belief,
            self.uncertainty,
            1.0 - self.base_rate,
        )
    }

    /// Binomial multiplication (logical AND).
    pub fn conjunction(&self, other: &Opinion) -> Result<Opinion> {
        let (x, y) = (self, other);
        let denom = 1.0 - x.base_rate * y.base_rate;
        if denom <= 0.0 {
            return Err(TrustError::DegenerateBaseRate(
                "conjunction undefined when both base rates are 1".into(),
            ));
        }
        let belief = x.belief * y.belief
            + ((1.0 - x.base_rate) * y.base_rate * x.belief * y.uncertainty
                + x.base_rate * (1.0 - y.base_rate) * x.uncertainty * y.belief)
                / denom;
        let disbelief = x.disbelief + y.disbelief - x.disbelief * y.disbelief;
        let uncertainty = x.uncertainty * y.uncertainty
            + ((1.0 - y.base_rate) * x.belief * y.uncertainty
                + (1.0 - x.base_rate) * x.uncertainty * y.belief)
                / denom;
        Ok(Opinion::from_computed(
            belief,
            disbelief,
            uncertainty,
            x.base_rate * y.base_rate,
        ))
    }

    /// Binomial comultiplication (logical OR).
    pub fn disjunction(&self, other: &Opinion) -> Result<Opinion> {
        let (x, y) = (self, other);
        let base_rate = x.base_rate + y.base_rate - x.base_rate * y.base_rate;
        if base_rate <= 0.0 {
            return Err(TrustError::DegenerateBaseRate(
                "disjunction undefined when both base rates are 0".into(),
            ));
        }
        let belief = x.belief + y.belief - x.belief * y.belief;
        let disbelief = x.disbelief * y.disbelief
            + (x.base_rate * (1.0 - y.base_rate) * x.disbelief * y.uncertainty
                + (1.0 - x.base_rate) * y.base_rate * x.uncertainty * y.disbelief)
                / base_rate;
        let uncertainty = x.uncertainty * y.uncertainty
            + (y.base_rate * x.disbelief * y.uncertainty
                + x.base_rate * x.uncertainty * y.disbelief)
                / base_rate;
        Ok(Opinion::from_computed(
            belief,
            disbelief,
            uncertainty,
            base_rate,
        ))
    }

    /// Trust discounting: `self` is the referral-trust opinion about the
    /// advisor, `target` is the advisor's opinion.
    pub fn discount(&self, target: &Opinion) -> Opinion {
        let p = self.projected_probability();
        let belief = p * target.belief;
        let disbelief = p * target.disbelief;
        let uncertainty = 1.0 - p * (target.belief + target.disbelief);
        Opinion::from_computed(belief, disbelief, uncertainty, target.base_rate)
    }

    /// Inverse of baseline quantification: `r = W·b/u`, `s = W·d/u`.
    pub fn to_evidence(&self, prior_weight: f64) -> Result<Evidence> {
        if !(prior_weight > 0.0 && prior_weight.is_finite()) {
            return Err(TrustError::Parameter(format!(
                "prior weight must be positive, got {prior_weight}"
            )));
        }
        if self.is_dogmatic() {
            return Err(TrustError::DogmaticOpinion);
        }
        Evidence::new(
            prior_weight * self.belief / self.uncertainty,
            prior_weight * self.disbelief / self.uncertainty,
        )
    }
}

impl fmt::Display for Opinion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(b={:.6}, d={:.6}, u={:.6}, a={:.6})",
            self.belief, self.disbelief, self.uncertainty, self.base_rate
        )
    }
}

/// Positive / negative evidence counts, optionally with an uncertainty weight.
///
/// Counts are reals: tolerance-zone evidence is fractional.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Evidence {
    positive: f64,
    negative: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    weight: Option<f64>,
}

impl Evidence {
    pub fn new(positive: f64, negative: f64) -> Result<Self> {
        for (name, v) in [("positive", positive), ("negative", negative)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(TrustError::InvalidEvidence(format!(
                    "{name} evidence must be finite and non-negative, got {v}"
                )));
            }
        }
        Ok(Self {
            positive,
            negative,
            weight: None,
        })
    }

    pub fn with_weight(positive: f64, negative: f64, weight: f64) -> Result<Self> {
        let mut e = Self::new(positive, negative)?;
        if !(weight.is_finite() && weight > 0.0) {
            return Err(TrustError::InvalidEvidence(format!(
                "uncertainty weight must be positive, got {weight}"
            )));
        }
        e.weight = Some(weight);
        Ok(e)
    }

    pub fn positive(&self) -> f64 {
        self.positive
    }

    pub fn negative(&self) -> f64 {
        self.negative
    }

    pub fn weight(&self) -> Option<f64> {
        self.weight
    }

    pub fn total(&self) -> f64 {
        self.positive + self.negative
    }
}

impl std::ops::Add for Evidence {
    type Output = Evidence;

    /// Counts add; the weight is dropped.
    fn add(self, rhs: Evidence) -> Evidence {
        Evidence {
            positive: self.positive + rhs.positive,
            negative: self.negative + rhs.negative,
            weight: None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn op(b: f64, d: f64, u: f64, a: f64) -> Opinion {
        Opinion::new(b, d, u, a).unwrap()
    }

    #[test]
    fn construction_bounds() {
        assert!(Opinion::new(0.0, 0.0, 1.0, 0.5).is_ok());
        assert!(Opinion::new(0.5, 0.11, 0.39, 0.5).is_ok());
        assert!(matches!(
            Opinion::new(0.5, 0.5, 0.5, 0.5),
            Err(TrustError::Validation(_))
        ));
        assert!(Opinion::new(-0.1, 0.6, 0.5, 0.5).is_err());
        assert!(Opinion::new(0.5, 0.5, 0.0, 1.1).is_err());
        assert!(Opinion::new(f64::NAN, 0.5, 0.5, 0.5).is_err());
    }

    #[test]
    fn projection() {
        assert_eq!(op(0.0, 0.0, 1.0, 0.5).projected_probability(), 0.5);
        for a in [0.0, 0.3, 1.0] {
            assert_eq!(op(1.0, 0.0, 0.0, a).projected_probability(), 1.0);
        }
        assert_abs_diff_eq!(
            op(0.6, 0.2, 0.2, 0.25).projected_probability(),
            0.65,
            epsilon = 1e-12
        );
    }

    #[test]
    fn negation() {
        let n = op(0.6, 0.1, 0.3, 0.5).negate();
        assert_abs_diff_eq!(n.belief(), 0.1);
        assert_abs_diff_eq!(n.disbelief(), 0.6);
        assert_abs_diff_eq!(n.uncertainty(), 0.3);
        let v = op(0.0, 0.0, 1.0, 0.3).negate();
        assert_abs_diff_eq!(v.base_rate(), 0.7, epsilon = 1e-15);
        assert_eq!(v.uncertainty(), 1.0);
    }

    #[test]
    fn conjunction_examples() {
        let x = op(0.8, 0.2, 0.0, 0.5);
        let y = op(0.5, 0.5, 0.0, 0.5);
        let c = x.conjunction(&y).unwrap();
        assert_abs_diff_eq!(c.belief(), 0.4, epsilon = 1e-12);
        assert_abs_diff_eq!(c.disbelief(), 0.6, epsilon = 1e-12);
        assert_abs_diff_eq!(c.uncertainty(), 0.0, epsilon = 1e-12);

        let absorb = op(0.0, 1.0, 0.0, 0.4)
            .conjunction(&op(0.3, 0.2, 0.5, 0.5))
            .unwrap();
        assert_abs_diff_eq!(absorb.disbelief(), 1.0, epsilon = 1e-12);

        // Components by hand substitution into the multiplication formulas.
        let c = op(0.6, 0.2, 0.2, 0.5)
            .conjunction(&op(0.3, 0.4, 0.3, 0.5))
            .unwrap();
        assert_abs_diff_eq!(c.belief(), 0.26, epsilon = 1e-12);
        assert_abs_diff_eq!(c.disbelief(), 0.52, epsilon = 1e-12);
        assert_abs_diff_eq!(c.uncertainty(), 0.22, epsilon = 1e-12);
        assert_abs_diff_eq!(c.base_rate(), 0.25, epsilon = 1e-12);
        assert_abs_diff_eq!(c.projected_probability(), 0.7 * 0.45, epsilon = 1e-12);

        assert!(matches!(
            op(0.5, 0.0, 0.5, 1.0).conjunction(&op(0.5, 0.0, 0.5, 1.0)),
            Err(TrustError::DegenerateBaseRate(_))
        ));
    }

    #[test]
    fn disjunction_examples() {
        let d = op(0.8, 0.2, 0.0, 0.5)
            .disjunction(&op(0.5, 0.5, 0.0, 0.5))
            .unwrap();
        assert_abs_diff_eq!(d.belief(), 0.9, epsilon = 1e-12);
        assert_abs_diff_eq!(d.disbelief(), 0.1, epsilon = 1e-12);
        assert_abs_diff_eq!(d.uncertainty(), 0.0, epsilon = 1e-12);

        let full = op(1.0, 0.0, 0.0, 0.2)
            .disjunction(&op(0.1, 0.6, 0.3, 0.5))
            .unwrap();
        assert_abs_diff_eq!(full.belief(), 1.0, epsilon = 1e-12);

        assert!(matches!(
            op(0.5, 0.0, 0.5, 0.0).disjunction(&op(0.5, 0.0, 0.5, 0.0)),
            Err(TrustError::DegenerateBaseRate(_))
        ));
    }

    #[test]
    fn discount_examples() {
        let target = op(0.8, 0.1, 0.1, 0.5);
        let full = op(1.0, 0.0, 0.0, 0.5).discount(&target);
        assert!(full.max_abs_diff(&target) < 1e-12);

        let none = op(0.0, 1.0, 0.0, 0.0).discount(&target);
        assert_eq!(none.uncertainty(), 1.0);
        assert_eq!(none.base_rate(), 0.5);

        let r = op(0.5, 0.3, 0.2, 0.5).discount(&target);
        assert!(r.max_abs_diff(&op(0.48, 0.06, 0.46, 0.5)) < 1e-12);
    }

    #[test]
    fn evidence_inversion() {
        let e = op(0.0, 0.0, 1.0, 0.5).to_evidence(2.0).unwrap();
        assert_eq!((e.positive(), e.negative()), (0.0, 0.0));
        let e = op(2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0, 0.5)
            .to_evidence(2.0)
            .unwrap();
        assert_abs_diff_eq!(e.positive(), 8.0, epsilon = 1e-12);
        assert_abs_diff_eq!(e.negative(), 2.0, epsilon = 1e-12);
        assert_eq!(
            op(1.0, 0.0, 0.0, 0.5).to_evidence(2.0),
            Err(TrustError::DogmaticOpinion)
        );
    }

    #[test]
    fn evidence_validation() {
        assert!(Evidence::new(-1.0, 0.0).is_err());
        assert!(Evidence::with_weight(1.0, 0.0, 0.0).is_err());
        assert!(Evidence::with_weight(1.0, 0.0, 3.0).is_ok());
    }

    #[test]
    fn serde_roundtrip_and_rejection() {
        let o = op(0.25, 0.5, 0.25, 0.5);
        let text = serde_json::to_string(&o).unwrap();
        assert_eq!(
            text,
            r#"{"belief":0.25,"disbelief":0.5,"uncertainty":0.25,"base_rate":0.5}"#
        );
        let back: Opinion = serde_json::from_str(&text).unwrap();
        assert_eq!(back, o);
        let bad = r#"{"belief":0.5,"disbelief":0.5,"uncertainty":0.5,"base_rate":0.5}"#;
        assert!(serde_json::from_str::<Opinion>(bad).is_err());
    }
}
