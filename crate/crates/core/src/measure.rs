//! A computable model of ℓ∞* = M(βℕ).
//!
//! A [`ModelMeasure`] is a finitely supported atomic part on ℕ plus a single
//! scalar mass carried by βℕ∖ℕ. On convergent sequences that mass acts as the
//! limit functional; elsewhere it is undefined and evaluation reports
//! [`LabError::OutsideModelDomain`]. Nonzero measures living purely on βℕ∖ℕ
//! with no limit-functional component are not representable.

use std::ops::{Add, Neg, Sub};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::gossez::affine_g;
use crate::point::PairPoint;
use crate::rational::{self, Rational};
use crate::sparse::SparseSeq;
use crate::tail::{couple, TailSeq};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ModelMeasure {
    /// Point masses `μ({k})`.
    pub atomic: SparseSeq,
    /// `μ(βℕ∖ℕ)`.
    #[serde(with = "rational::text")]
    pub infinity_mass: Rational,
}

impl ModelMeasure {
    pub fn new(atomic: SparseSeq, infinity_mass: Rational) -> Self {
        Self {
            atomic,
            infinity_mass,
        }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    /// The canonical embedding ℓ₁ → ℓ∞*.
    pub fn atomic_only(x: SparseSeq) -> Self {
        Self::new(x, Rational::zero())
    }

    /// Pure mass at infinity.
    pub fn at_infinity(a: Rational) -> Self {
        Self::new(SparseSeq::zero(), a)
    }

    pub fn is_zero(&self) -> bool {
        self.atomic.is_zero() && self.infinity_mass.is_zero()
    }

    pub fn scale(&self, a: &Rational) -> Self {
        Self::new(self.atomic.scale(a), &self.infinity_mass * a)
    }
}

impl Add for &ModelMeasure {
    type Output = ModelMeasure;

    fn add(self, rhs: &ModelMeasure) -> ModelMeasure {
        ModelMeasure::new(&self.atomic + &rhs.atomic, &self.infinity_mass + &rhs.infinity_mass)
    }
}

impl Sub for &ModelMeasure {
    type Output = ModelMeasure;

    fn sub(self, rhs: &ModelMeasure) -> ModelMeasure {
        ModelMeasure::new(&self.atomic - &rhs.atomic, &self.infinity_mass - &rhs.infinity_mass)
    }
}

impl Neg for &ModelMeasure {
    type Output = ModelMeasure;

    fn neg(self) -> ModelMeasure {
        ModelMeasure::new(-&self.atomic, -&self.infinity_mass)
    }
}

/// `⟨μ, y⟩ = ⟨μ̄, y⟩ + μ(βℕ∖ℕ)·lim y`.
pub fn pair_measure(mu: &ModelMeasure, y: &TailSeq) -> Result<Rational> {
    let atomic = couple(&mu.atomic, y);
    if mu.infinity_mass.is_zero() {
        return Ok(atomic);
    }
    let lim = y.limit().ok_or_else(|| {
        LabError::OutsideModelDomain(format!(
            "mass at infinity {} acting on a sequence without limit",
            rational::to_text(&mu.infinity_mass)
        ))
    })?;
    Ok(atomic + &mu.infinity_mass * lim)
}

/// Adjoint of G: `G*μ = −μ(βℕ∖ℕ)𝟙 − Gμ̄`.
pub fn apply_gstar(mu: &ModelMeasure) -> TailSeq {
    affine_g(&mu.atomic, true, &-&mu.infinity_mass)
}

/// Model-restricted kernel membership of G*.
pub fn in_kernel_model(mu: &ModelMeasure) -> bool {
    mu.is_zero()
}

/// `(μ, −G*μ) = (μ, a𝟙 + Gμ̄)` in the second dual system.
pub fn graph_neg_gstar_point(mu: &ModelMeasure) -> PairPoint {
    PairPoint::second(mu.clone(), -&apply_gstar(mu))
}
