//! Finitely supported sequences, the computable slice of ℓ₁.

use std::collections::BTreeMap;
use std::ops::{Add, Neg, Sub};

use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{LabError, Result};
use crate::rational::{self, Rational};

/// Finitely supported sequence indexed from 1. No stored entry is zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct SparseSeq {
    entries: BTreeMap<usize, Rational>,
}

impl SparseSeq {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Unit vector `e_k`.
    pub fn unit(k: usize) -> Self {
        Self::from_entries([(k, rational::one())]).expect("unit index must be >= 1")
    }

    /// Builds from `(index, value)` pairs. Repeated indices are summed.
    pub fn from_entries<I>(entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, Rational)>,
    {
        let mut map: BTreeMap<usize, Rational> = BTreeMap::new();
        for (n, v) in entries {
            if n == 0 {
                return Err(LabError::InvalidSequence("indices start at 1".into()));
            }
            *map.entry(n).or_insert_with(Rational::zero) += v;
        }
        map.retain(|_, v| !v.is_zero());
        Ok(Self { entries: map })
    }

    /// `values[i]` is placed at index `i + 1`.
    pub fn from_dense(values: &[Rational]) -> Self {
        Self::from_entries(values.iter().cloned().enumerate().map(|(i, v)| (i + 1, v)))
            .expect("dense indices are positive")
    }

    pub fn get(&self, n: usize) -> Rational {
        self.entries.get(&n).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Rational)> + '_ {
        self.entries.iter().map(|(n, v)| (*n, v))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn support_len(&self) -> usize {
        self.entries.len()
    }

    /// Largest index carrying a nonzero entry, 0 for the zero sequence.
    pub fn max_index(&self) -> usize {
        self.entries.keys().next_back().copied().unwrap_or(0)
    }

    pub fn sum(&self) -> Rational {
        rational::sum(self.entries.values())
    }

    pub fn l1_norm(&self) -> Rational {
        let abs: Vec<Rational> = self.entries.values().map(|v| v.abs()).collect();
        rational::sum(&abs)
    }

    pub fn scale(&self, a: &Rational) -> Self {
        if a.is_zero() {
            return Self::zero();
        }
        Self {
            entries: self.entries.iter().map(|(n, v)| (*n, v * a)).collect(),
        }
    }

    /// Values at indices `1..=len`.
    pub fn to_dense(&self, len: usize) -> Vec<Rational> {
        (1..=len).map(|n| self.get(n)).collect()
    }
}

/// `‖x‖₁`.
pub fn l1_norm(x: &SparseSeq) -> Rational {
    x.l1_norm()
}

impl Add for &SparseSeq {
    type Output = SparseSeq;

    fn add(self, rhs: &SparseSeq) -> SparseSeq {
        SparseSeq::from_entries(self.iter().chain(rhs.iter()).map(|(n, v)| (n, v.clone())))
            .expect("indices already valid")
    }
}

impl Sub for &SparseSeq {
    type Output = SparseSeq;

    fn sub(self, rhs: &SparseSeq) -> SparseSeq {
        self + &(-rhs)
    }
}

impl Neg for &SparseSeq {
    type Output = SparseSeq;

    fn neg(self) -> SparseSeq {
        SparseSeq {
            entries: self.entries.iter().map(|(n, v)| (*n, -v)).collect(),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct SparseWire {
    entries: Vec<(usize, String)>,
}

impl Serialize for SparseSeq {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SparseWire {
            entries: self.iter().map(|(n, v)| (n, rational::to_text(v))).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SparseSeq {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error;
        let wire = SparseWire::deserialize(d)?;
        let mut entries = Vec::with_capacity(wire.entries.len());
        for (n, v) in wire.entries {
            entries.push((n, rational::parse(&v).map_err(D::Error::custom)?));
        }
        SparseSeq::from_entries(entries).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, q};

    #[test]
    fn l1_norm_examples() {
        assert_eq!(l1_norm(&SparseSeq::zero()), int(0));
        assert_eq!(l1_norm(&SparseSeq::unit(1)), int(1));
        let x = SparseSeq::from_dense(&[int(1), int(-1), int(1), int(-1)]);
        assert_eq!(l1_norm(&x), int(4));
    }

    #[test]
    fn zeros_are_never_stored() {
        let x = SparseSeq::from_entries([(3, int(2)), (3, int(-2)), (5, int(0))]).unwrap();
        assert!(x.is_zero());
        assert_eq!(x.max_index(), 0);
        assert!(SparseSeq::from_entries([(0, int(1))]).is_err());
    }

    #[test]
    fn json_layout() {
        let x = SparseSeq::from_entries([(4, q(1, 2)), (1, int(-3))]).unwrap();
        let json = serde_json::to_string(&x).unwrap();
        assert_eq!(json, r#"{"entries":[[1,"-3/1"],[4,"1/2"]]}"#);
        let back: SparseSeq = serde_json::from_str(&json).unwrap();
        assert_eq!(back, x);
    }
}
