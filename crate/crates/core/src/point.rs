//! Points of the product spaces Z = X × Y and the natural coupling on Z × Z.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::measure::{pair_measure, ModelMeasure};
use crate::rational::Rational;
use crate::sparse::SparseSeq;
use crate::tail::{couple, TailSeq};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DualSystem {
    /// (ℓ₁, ℓ∞)
    First,
    /// (ℓ∞*, ℓ∞), with ℓ∞* replaced by its computable model.
    Second,
}

impl fmt::Display for DualSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DualSystem::First => "first",
            DualSystem::Second => "second",
        })
    }
}

/// A point `z = (x, y)`; the variant fixes the dual system.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "system", rename_all = "lowercase")]
pub enum PairPoint {
    First { x: SparseSeq, y: TailSeq },
    Second {
        #[serde(rename = "x")]
        mu: ModelMeasure,
        y: TailSeq,
    },
}

impl PairPoint {
    pub fn first(x: SparseSeq, y: TailSeq) -> Self {
        PairPoint::First { x, y }
    }

    pub fn second(mu: ModelMeasure, y: TailSeq) -> Self {
        PairPoint::Second { mu, y }
    }

    pub fn origin(system: DualSystem) -> Self {
        match system {
            DualSystem::First => Self::first(SparseSeq::zero(), TailSeq::zero()),
            DualSystem::Second => Self::second(ModelMeasure::zero(), TailSeq::zero()),
        }
    }

    pub fn system(&self) -> DualSystem {
        match self {
            PairPoint::First { .. } => DualSystem::First,
            PairPoint::Second { .. } => DualSystem::Second,
        }
    }

    pub fn y(&self) -> &TailSeq {
        match self {
            PairPoint::First { y, .. } | PairPoint::Second { y, .. } => y,
        }
    }

    /// The first component as a model measure (ℓ₁ embeds with zero mass at infinity).
    pub fn measure(&self) -> ModelMeasure {
        match self {
            PairPoint::First { x, .. } => ModelMeasure::atomic_only(x.clone()),
            PairPoint::Second { mu, .. } => mu.clone(),
        }
    }

    /// Canonical embedding of a first-system point into the second system.
    pub fn embed(&self) -> Self {
        Self::second(self.measure(), self.y().clone())
    }

    /// `(x, y) ↦ (x, −y)`.
    pub fn negate_y(&self) -> Self {
        self.with_y(-self.y())
    }

    pub fn with_y(&self, y: TailSeq) -> Self {
        match self {
            PairPoint::First { x, .. } => Self::first(x.clone(), y),
            PairPoint::Second { mu, .. } => Self::second(mu.clone(), y),
        }
    }

    pub fn scale(&self, a: &Rational) -> Self {
        match self {
            PairPoint::First { x, y } => Self::first(x.scale(a), y.scale(a)),
            PairPoint::Second { mu, y } => Self::second(mu.scale(a), y.scale(a)),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        match (self, other) {
            (PairPoint::First { x, y }, PairPoint::First { x: u, y: v }) => {
                Ok(Self::first(x + u, y + v))
            }
            (PairPoint::Second { mu, y }, PairPoint::Second { mu: nu, y: v }) => {
                Ok(Self::second(mu + nu, y + v))
            }
            _ => Err(mismatch(self, other)),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-crate::rational::one()))
    }

    /// `c(z) = ⟨x, y⟩` in the point's own system.
    pub fn coupling(&self) -> Result<Rational> {
        pair_x_with(self, self.y())
    }
}

fn mismatch(a: &PairPoint, b: &PairPoint) -> LabError {
    LabError::SystemMismatch {
        left: a.system(),
        right: b.system(),
    }
}

/// Pairs the first component of `z` with an arbitrary second-space element.
fn pair_x_with(z: &PairPoint, v: &TailSeq) -> Result<Rational> {
    match z {
        PairPoint::First { x, .. } => Ok(couple(x, v)),
        PairPoint::Second { mu, .. } => pair_measure(mu, v),
    }
}

/// `z·w = c(x, v) + c(u, y)` for `z = (x, y)`, `w = (u, v)`.
pub fn natural_couple(z: &PairPoint, w: &PairPoint) -> Result<Rational> {
    if z.system() != w.system() {
        return Err(mismatch(z, w));
    }
    Ok(pair_x_with(z, w.y())? + pair_x_with(w, z.y())?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gossez::apply_g;
    use crate::rational::int;

    #[test]
    fn natural_couple_examples() {
        let e1 = SparseSeq::unit(1);
        let z = PairPoint::first(e1.clone(), apply_g(&e1));
        assert_eq!(natural_couple(&z, &z).unwrap(), int(0));

        let z = PairPoint::first(SparseSeq::zero(), TailSeq::ones());
        let w = PairPoint::first(e1, TailSeq::zero());
        assert_eq!(natural_couple(&z, &w).unwrap(), int(1));
        assert_eq!(natural_couple(&z, &PairPoint::origin(DualSystem::First)).unwrap(), int(0));
    }

    #[test]
    fn mismatched_systems_are_rejected() {
        let a = PairPoint::origin(DualSystem::First);
        let b = PairPoint::origin(DualSystem::Second);
        assert!(matches!(natural_couple(&a, &b), Err(LabError::SystemMismatch { .. })));
        assert!(a.add(&b).is_err());
    }

    #[test]
    fn self_coupling_is_twice_c() {
        let x = SparseSeq::from_dense(&[int(3), int(-2)]);
        let z = PairPoint::first(x, TailSeq::periodic(vec![int(1), int(5)]).unwrap());
        assert_eq!(natural_couple(&z, &z).unwrap(), int(2) * z.coupling().unwrap());
    }

    #[test]
    fn json_layout() {
        let z = PairPoint::second(ModelMeasure::at_infinity(int(1)), TailSeq::ones());
        let json = serde_json::to_string(&z).unwrap();
        assert!(json.starts_with(r#"{"system":"second","x":{"atomic""#));
        assert_eq!(serde_json::from_str::<PairPoint>(&json).unwrap(), z);
    }
}
