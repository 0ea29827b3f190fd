//! Belief fusion operators.
//!
//! Cumulative, averaging and weighted fusion require equal base rates; the
//! constraint operator combines differing base rates by confidence.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Result, TrustError};
use crate::opinion::{Opinion, BASE_RATE_TOLERANCE};

/// Conflict at or above this level is treated as total.
const TOTAL_CONFLICT_EPS: f64 = 1e-12;

/// Selects one of the fusion operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FusionOperator {
    #[default]
    Cumulative,
    Averaging,
    Weighted,
    Constraint,
}

impl FusionOperator {
    pub const ALL: [FusionOperator; 4] = [
        FusionOperator::Cumulative,
        FusionOperator::Averaging,
        FusionOperator::Weighted,
        FusionOperator::Constraint,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            FusionOperator::Cumulative => "cumulative",
            FusionOperator::Averaging => "averaging",
            FusionOperator::Weighted => "weighted",
            FusionOperator::Constraint => "constraint",
        }
    }

    pub fn fuse(&self, p: &Opinion, q: &Opinion) -> Result<Opinion> {
        match self {
            FusionOperator::Cumulative => fuse_cumulative(p, q),
            FusionOperator::Averaging => fuse_averaging(p, q),
            FusionOperator::Weighted => fuse_weighted(p, q),
            FusionOperator::Constraint => fuse_constraint(p, q),
        }
    }

    /// Left fold over `opinions` in the given order.
    pub fn fuse_all<'a, I>(&self, opinions: I) -> Result<Option<Opinion>>
    where
        I: IntoIterator<Item = &'a Opinion>,
    {
        let mut iter = opinions.into_iter();
        let Some(first) = iter.next() else {
            return Ok(None);
        };
        iter.try_fold(*first, |acc, next| self.fuse(&acc, next))
            .map(Some)
    }
}

impl fmt::Display for FusionOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FusionOperator {
    type Err = TrustError;

    fn from_str(s: &str) -> Result<Self> {
        FusionOperator::ALL
            .into_iter()
            .find(|op| op.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| TrustError::Parameter(format!("unknown fusion operator '{s}'")))
    }
}

fn shared_base_rate(p: &Opinion, q: &Opinion) -> Result<f64> {
    if (p.base_rate() - q.base_rate()).abs() > BASE_RATE_TOLERANCE {
        return Err(TrustError::BaseRateMismatch {
            left: p.base_rate(),
            right: q.base_rate(),
        });
    }
    Ok(p.base_rate())
}

/// Equal-weight limit used when both arguments are dogmatic.
fn dogmatic_average(p: &Opinion, q: &Opinion, base_rate: f64) -> Opinion {
    Opinion::from_computed(
        (p.belief() + q.belief()) / 2.0,
        (p.disbelief() + q.disbelief()) / 2.0,
        0.0,
        base_rate,
    )
}

/// Cumulative fusion: evidence from independent sources adds up.
pub fn fuse_cumulative(p: &Opinion, q: &Opinion) -> Result<Opinion> {
    let a = shared_base_rate(p, q)?;
    let (up, uq) = (p.uncertainty(), q.uncertainty());
    if up == 0.0 && uq == 0.0 {
        return Ok(dogmatic_average(p, q, a));
    }
    let k = up + uq - up * uq;
    let belief = (p.belief() * uq + q.belief() * up) / k;
    let disbelief = (p.disbelief() * uq + q.disbelief() * up) / k;
    let uncertainty = up * uq / k;
    Ok(Opinion::from_computed(belief, disbelief, uncertainty, a))
}

/// Averaging fusion for dependent sources; idempotent.
pub fn fuse_averaging(p: &Opinion, q: &Opinion) -> Result<Opinion> {
    let a = shared_base_rate(p, q)?;
    let (up, uq) = (p.uncertainty(), q.uncertainty());
    if up == 0.0 && uq == 0.0 {
        return Ok(dogmatic_average(p, q, a));
    }
    let k = up + uq;
    let belief = (p.belief() * uq + q.belief() * up) / k;
    let disbelief = (p.disbelief() * uq + q.disbelief() * up) / k;
    let uncertainty = 2.0 * up * uq / k;
    Ok(Opinion::from_computed(belief, disbelief, uncertainty, a))
}

/// Confidence-weighted fusion; idempotent with the vacuous opinion as
/// neutral element.
pub fn fuse_weighted(p: &Opinion, q: &Opinion) -> Result<Opinion> {
    let a = shared_base_rate(p, q)?;
    let (up, uq) = (p.uncertainty(), q.uncertainty());
    if up == 1.0 && uq == 1.0 {
        return Ok(Opinion::from_computed(0.0, 0.0, 1.0, a));
    }
    if up == 0.0 && uq == 0.0 {
        return Ok(dogmatic_average(p, q, a));
    }
    let (cp, cq) = (1.0 - up, 1.0 - uq);
    let k = up + uq - 2.0 * up * uq;
    let belief = (p.belief() * cp * uq + q.belief() * cq * up) / k;
    let disbelief = (p.disbelief() * cp * uq + q.disbelief() * cq * up) / k;
    let uncertainty = (2.0 - up - uq) * up * uq / k;
    Ok(Opinion::from_computed(belief, disbelief, uncertainty, a))
}

/// Belief constraint fusion. Undefined under total conflict.
pub fn fuse_constraint(p: &Opinion, q: &Opinion) -> Result<Opinion> {
    let conflict = p.belief() * q.disbelief() + p.disbelief() * q.belief();
    let norm = 1.0 - conflict;
    if norm <= TOTAL_CONFLICT_EPS {
        return Err(TrustError::TotalConflict);
    }
    let (up, uq) = (p.uncertainty(), q.uncertainty());
    let belief = (p.belief() * q.belief() + p.belief() * uq + up * q.belief()) / norm;
    let disbelief =
        (p.disbelief() * q.disbelief() + p.disbelief() * uq + up * q.disbelief()) / norm;
    let uncertainty = up * uq / norm;
    let confidence = 2.0 - up - uq;
    let base_rate = if confidence > 0.0 {
        (p.base_rate() * (1.0 - up) + q.base_rate() * (1.0 - uq)) / confidence
    } else {
        (p.base_rate() + q.base_rate()) / 2.0
    };
    Ok(Opinion::from_computed(
        belief,
        disbelief,
        uncertainty,
        base_rate,
    ))
}
