//! Eventually periodic sequences, the computable slice of ℓ∞.
//!
//! A [`TailSeq`] is a finite head followed by a repeating pattern. Values are
//! kept in a canonical form (minimal period, shortest head) so that structural
//! equality coincides with pointwise equality of the sequences.

use std::ops::{Add, Neg, Sub};

use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{LabError, Result};
use crate::rational::{self, Rational};
use crate::sparse::SparseSeq;

/// Tail description used at construction and serialization boundaries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tail {
    Constant(Rational),
    Periodic(Vec<Rational>),
}

/// `head` covers indices `1..=head.len()`; index `n > H` takes
/// `pattern[(n - H - 1) % pattern.len()]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TailSeq {
    head: Vec<Rational>,
    pattern: Vec<Rational>,
}

impl TailSeq {
    pub fn new(head: Vec<Rational>, tail: Tail) -> Result<Self> {
        let pattern = match tail {
            Tail::Constant(c) => vec![c],
            Tail::Periodic(p) if p.is_empty() => {
                return Err(LabError::InvalidSequence("periodic tail must be nonempty".into()))
            }
            Tail::Periodic(p) => p,
        };
        Ok(Self::from_parts(head, pattern))
    }

    fn from_parts(mut head: Vec<Rational>, pattern: Vec<Rational>) -> Self {
        debug_assert!(!pattern.is_empty());
        let period = minimal_period(&pattern);
        let mut pattern: Vec<Rational> = pattern[..period].to_vec();
        while head.last().is_some_and(|h| h == pattern.last().unwrap()) {
            head.pop();
            pattern.rotate_right(1);
        }
        Self { head, pattern }
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_parts(Vec::new(), vec![c])
    }

    pub fn zero() -> Self {
        Self::constant(Rational::zero())
    }

    /// The all-ones sequence 𝟙.
    pub fn ones() -> Self {
        Self::constant(rational::one())
    }

    pub fn periodic(pattern: Vec<Rational>) -> Result<Self> {
        Self::new(Vec::new(), Tail::Periodic(pattern))
    }

    /// Finitely supported values viewed as a bounded sequence (zero tail).
    pub fn from_sparse(x: &SparseSeq) -> Self {
        Self::from_parts(x.to_dense(x.max_index()), vec![Rational::zero()])
    }

    pub fn head(&self) -> &[Rational] {
        &self.head
    }

    pub fn pattern(&self) -> &[Rational] {
        &self.pattern
    }

    pub fn period(&self) -> usize {
        self.pattern.len()
    }

    pub fn tail(&self) -> Tail {
        if self.pattern.len() == 1 {
            Tail::Constant(self.pattern[0].clone())
        } else {
            Tail::Periodic(self.pattern.clone())
        }
    }

    pub fn is_zero(&self) -> bool {
        self.head.is_empty() && self.pattern.len() == 1 && self.pattern[0].is_zero()
    }

    /// Value at 1-based index `n`.
    pub fn get(&self, n: usize) -> Rational {
        assert!(n >= 1, "indices start at 1");
        let h = self.head.len();
        if n <= h {
            self.head[n - 1].clone()
        } else {
            self.pattern[(n - h - 1) % self.pattern.len()].clone()
        }
    }

    pub fn linf_norm(&self) -> Rational {
        self.head
            .iter()
            .chain(&self.pattern)
            .map(|v| v.abs())
            .max()
            .expect("pattern is nonempty")
    }

    /// `Some(limit)` iff the tail is constant, i.e. the sequence lies in 𝔠.
    pub fn limit(&self) -> Option<Rational> {
        match self.pattern.as_slice() {
            [c] => Some(c.clone()),
            _ => None,
        }
    }

    /// Half the spread of the tail pattern. Lower bound for the ℓ∞ distance
    /// to any convergent sequence.
    pub fn oscillation(&self) -> Rational {
        let max = self.pattern.iter().max().expect("pattern is nonempty");
        let min = self.pattern.iter().min().expect("pattern is nonempty");
        (max - min) / rational::int(2)
    }

    pub fn scale(&self, a: &Rational) -> Self {
        self.map(|v| v * a)
    }

    pub fn map(&self, f: impl Fn(&Rational) -> Rational) -> Self {
        Self::from_parts(
            self.head.iter().map(&f).collect(),
            self.pattern.iter().map(&f).collect(),
        )
    }

    /// Pointwise combination of two sequences.
    pub fn zip_with(&self, other: &Self, f: impl Fn(&Rational, &Rational) -> Rational) -> Self {
        let h = self.head.len().max(other.head.len());
        let p = self.period().lcm(&other.period());
        let head = (1..=h).map(|n| f(&self.get(n), &other.get(n))).collect();
        let pattern = (h + 1..=h + p)
            .map(|n| f(&self.get(n), &other.get(n)))
            .collect();
        Self::from_parts(head, pattern)
    }
}

impl Add for &TailSeq {
    type Output = TailSeq;

    fn add(self, rhs: &TailSeq) -> TailSeq {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &TailSeq {
    type Output = TailSeq;

    fn sub(self, rhs: &TailSeq) -> TailSeq {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Neg for &TailSeq {
    type Output = TailSeq;

    fn neg(self) -> TailSeq {
        self.map(|v| -v)
    }
}

fn minimal_period(pattern: &[Rational]) -> usize {
    let len = pattern.len();
    (1..=len)
        .filter(|p| len.is_multiple_of(*p))
        .find(|&p| (p..len).all(|i| pattern[i] == pattern[i - p]))
        .unwrap_or(len)
}

pub fn linf_norm(y: &TailSeq) -> Rational {
    y.linf_norm()
}

pub fn limit(y: &TailSeq) -> Option<Rational> {
    y.limit()
}

pub fn oscillation(y: &TailSeq) -> Rational {
    y.oscillation()
}

/// The ℓ₁ × ℓ∞ coupling `⟨x, y⟩ = Σ xₙ yₙ`, a finite sum over the support of `x`.
pub fn couple(x: &SparseSeq, y: &TailSeq) -> Rational {
    let mut acc = rational::Accumulator::new();
    for (n, v) in x.iter() {
        acc.add(&(v * y.get(n)));
    }
    acc.value()
}

#[derive(Serialize, Deserialize)]
struct TailWire {
    kind: String,
    #[serde(with = "rational::text_vec")]
    values: Vec<Rational>,
}

#[derive(Serialize, Deserialize)]
struct TailSeqWire {
    #[serde(with = "rational::text_vec")]
    head: Vec<Rational>,
    tail: TailWire,
}

impl Serialize for TailSeq {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let kind = if self.pattern.len() == 1 { "const" } else { "periodic" };
        TailSeqWire {
            head: self.head.clone(),
            tail: TailWire {
                kind: kind.into(),
                values: self.pattern.clone(),
            },
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TailSeq {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error;
        let wire = TailSeqWire::deserialize(d)?;
        let tail = match (wire.tail.kind.as_str(), wire.tail.values) {
            ("const", v) if v.len() == 1 => Tail::Constant(v.into_iter().next().unwrap()),
            ("const", _) => return Err(D::Error::custom("const tail takes exactly one value")),
            ("periodic", v) => Tail::Periodic(v),
            (k, _) => return Err(D::Error::custom(format!("unknown tail kind {k:?}"))),
        };
        TailSeq::new(wire.head, tail).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, q};

    fn alternating() -> TailSeq {
        TailSeq::periodic(vec![int(1), int(-1)]).unwrap()
    }

    #[test]
    fn linf_norm_examples() {
        assert_eq!(linf_norm(&TailSeq::ones()), int(1));
        let y = TailSeq::new(vec![int(1), int(-1)], Tail::Constant(int(-2))).unwrap();
        assert_eq!(linf_norm(&y), int(2));
        assert_eq!(linf_norm(&alternating()), int(1));
    }

    #[test]
    fn limit_examples() {
        assert_eq!(limit(&TailSeq::ones()), Some(int(1)));
        let ge1 = TailSeq::new(vec![int(0)], Tail::Constant(int(-1))).unwrap();
        assert_eq!(limit(&ge1), Some(int(-1)));
        assert_eq!(limit(&alternating()), None);
    }

    #[test]
    fn oscillation_examples() {
        assert_eq!(oscillation(&TailSeq::constant(int(5))), int(0));
        assert_eq!(oscillation(&alternating()), int(1));
        assert_eq!(oscillation(&TailSeq::periodic(vec![int(0), int(1)]).unwrap()), q(1, 2));
    }

    #[test]
    fn couple_examples() {
        assert_eq!(couple(&SparseSeq::unit(1), &TailSeq::ones()), int(1));
        assert_eq!(couple(&SparseSeq::zero(), &alternating()), int(0));
    }

    #[test]
    fn normalization_is_canonical() {
        // [1, -1] followed by periodic [1, -1] is just the alternating sequence.
        let a = TailSeq::new(vec![int(1), int(-1)], Tail::Periodic(vec![int(1), int(-1)])).unwrap();
        assert_eq!(a, alternating());
        assert!(a.head().is_empty());

        let b = TailSeq::new(vec![int(3)], Tail::Periodic(vec![int(2), int(2), int(2)])).unwrap();
        assert_eq!(b.tail(), Tail::Constant(int(2)));
        assert_eq!(b.head(), &[int(3)]);

        // a trailing head value equal to the shifted pattern gets absorbed
        let c = TailSeq::new(vec![int(0), int(-1)], Tail::Periodic(vec![int(1), int(-1)])).unwrap();
        assert_eq!(c.head(), &[int(0)]);
        assert_eq!(c.pattern(), &[int(-1), int(1)]);
        for n in 1..10 {
            let expect = if n == 1 { int(0) } else if n % 2 == 0 { int(-1) } else { int(1) };
            assert_eq!(c.get(n), expect);
        }
    }

    #[test]
    fn mixed_period_arithmetic() {
        let a = TailSeq::new(vec![int(7)], Tail::Periodic(vec![int(1), int(2)])).unwrap();
        let b = TailSeq::periodic(vec![int(0), int(0), int(5)]).unwrap();
        let s = &a + &b;
        for n in 1..40 {
            assert_eq!(s.get(n), a.get(n) + b.get(n));
        }
        assert_eq!(s.period(), 6);
        assert!((&s - &s).is_zero());
    }

    #[test]
    fn empty_periodic_rejected() {
        assert!(TailSeq::periodic(vec![]).is_err());
    }

    #[test]
    fn json_layout() {
        let y = TailSeq::new(vec![int(0)], Tail::Constant(int(-1))).unwrap();
        let json = serde_json::to_string(&y).unwrap();
        assert_eq!(json, r#"{"head":["0/1"],"tail":{"kind":"const","values":["-1/1"]}}"#);
        assert_eq!(serde_json::from_str::<TailSeq>(&json).unwrap(), y);
        let bad = r#"{"head":[],"tail":{"kind":"const","values":["1","2"]}}"#;
        assert!(serde_json::from_str::<TailSeq>(bad).is_err());
    }
}
