//! Exact scalars.
//!
//! Every quantity in the lab is a [`Rational`]: an arbitrary-precision
//! fraction kept in lowest terms with a positive denominator. Nothing here
//! ever rounds.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{de, Deserialize, Deserializer, Serializer};

use crate::error::LabError;

/// Arbitrary-precision rational in canonical reduced form.
pub type Rational = BigRational;

/// `n/d` as a reduced rational. Panics if `d == 0`.
pub fn q(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// Canonical text form: always `p/q`, including `q = 1`.
pub fn to_text(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `p/q` or a bare integer `p`.
pub fn parse(s: &str) -> Result<Rational, LabError> {
    let bad = || LabError::Parse(format!("invalid rational {s:?}"));
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

/// Sign of `r` as `-1`, `0` or `1`.
pub fn signum(r: &Rational) -> i32 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

/// Running sum kept over a common denominator and reduced only when read.
#[derive(Debug, Clone)]
pub struct Accumulator {
    numer: BigInt,
    denom: BigInt,
}

impl Default for Accumulator {
    fn default() -> Self {
        Self {
            numer: BigInt::zero(),
            denom: BigInt::one(),
        }
    }
}

impl Accumulator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, r: &Rational) {
        let (p, q) = (r.numer(), r.denom());
        if p.is_zero() {
            return;
        }
        let g = q.gcd(&(&self.denom % q));
        if &g == q {
            self.numer += p * (&self.denom / q);
        } else {
            let q_g = q / &g;
            self.numer = &self.numer * &q_g + p * (&self.denom / &g);
            self.denom *= q_g;
        }
    }

    pub fn value(&self) -> Rational {
        BigRational::new(self.numer.clone(), self.denom.clone())
    }
}

/// Exact sum with a single reduction at the end.
pub fn sum<'a>(values: impl IntoIterator<Item = &'a Rational>) -> Rational {
    let mut acc = Accumulator::new();
    for v in values {
        acc.add(v);
    }
    acc.value()
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    let mut d = BigInt::one();
    for v in values {
        let q = v.denom();
        let g = q.gcd(&(&d % q));
        d *= q / g;
    }
    d
}

/// serde adapter writing rationals as `"p/q"` strings.
pub mod text {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&to_text(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse(&s).map_err(de::Error::custom)
    }
}

/// serde adapter for `Vec<Rational>`.
pub mod text_vec {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for r in v {
            seq.serialize_element(&to_text(r))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter()
            .map(|s| parse(s).map_err(de::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_form_is_always_a_fraction() {
        assert_eq!(to_text(&int(3)), "3/1");
        assert_eq!(to_text(&q(-2, 4)), "-1/2");
        assert_eq!(to_text(&zero()), "0/1");
    }

    #[test]
    fn accumulator_matches_naive_sum() {
        let vals = [q(1, 3), q(-5, 6), q(7, 10), int(4), q(1, 997), q(-2, 3)];
        let naive: Rational = vals.iter().sum();
        assert_eq!(sum(&vals), naive);
        assert_eq!(sum(&[]), zero());
        assert_eq!(common_denominator(&vals), BigInt::from(30 * 997));
    }

    #[test]
    fn parse_accepts_both_forms() {
        assert_eq!(parse("6/-4").unwrap(), q(-3, 2));
        assert_eq!(parse(" 7 ").unwrap(), int(7));
        assert!(parse("1/0").is_err());
        assert!(parse("x").is_err());
    }

    #[test]
    fn reduced_form_invariant() {
        let r = q(10, -15);
        assert_eq!(r.numer(), &BigInt::from(-2));
        assert_eq!(r.denom(), &BigInt::from(3));
        assert_eq!(signum(&r), -1);
    }
}
