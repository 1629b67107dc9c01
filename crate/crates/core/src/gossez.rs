//! The Gossez operator G : ℓ₁ → ℓ∞,
//!
//! ```text
//! (Gx)_n = −Σ_{k<n} x_k + Σ_{k>n} x_k = Σ_k x_k α(k, n)
//! ```
//!
//! together with its negation, exact inversion on eventually constant targets,
//! and the range experiments behind weak* density and non-closedness.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::linalg;
use crate::rational::{self, Rational};
use crate::sparse::SparseSeq;
use crate::tail::{couple, Tail, TailSeq};

/// Kernel of G: −1 below the diagonal index, 0 on it, +1 above.
pub fn alpha(k: usize, n: usize) -> i64 {
    match k.cmp(&n) {
        std::cmp::Ordering::Less => -1,
        std::cmp::Ordering::Equal => 0,
        std::cmp::Ordering::Greater => 1,
    }
}

/// `Gx` as a head over `1..=max(supp x)` with constant tail `−Σ x_k`.
pub fn apply_g(x: &SparseSeq) -> TailSeq {
    affine_g(x, false, &Rational::zero())
}

/// `±Gx + c𝟙`, computed over one common denominator.
pub(crate) fn affine_g(x: &SparseSeq, negate: bool, shift: &Rational) -> TailSeq {
    let h = x.max_index();
    let d = rational::common_denominator(x.iter().map(|(_, v)| v).chain([shift]));
    let sign = if negate { -1 } else { 1 };
    let scaled: Vec<BigInt> = (1..=h)
        .map(|n| {
            let v = x.get(n);
            v.numer() * (&d / v.denom()) * sign
        })
        .collect();
    let c = shift.numer() * (&d / shift.denom());
    let total: BigInt = scaled.iter().sum();
    let mut before = BigInt::zero();
    let mut head = Vec::with_capacity(h);
    for a in &scaled {
        head.push(Rational::new(&total - &before * 2 - a + &c, d.clone()));
        before += a;
    }
    TailSeq::new(head, Tail::Constant(Rational::new(c - total, d))).expect("constant tail")
}

/// `(¬G)x = −Gx`.
pub fn apply_neg_g(x: &SparseSeq) -> TailSeq {
    affine_g(x, true, &Rational::zero())
}

/// Outcome of solving `Gx = y` inside the eventually periodic class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RangeCertificate {
    #[serde(skip)]
    pub target: Option<TailSeq>,
    pub feasible: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub preimage: Option<SparseSeq>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub obstruction: Option<String>,
    /// Magnitude of the alternating tail the recurrence is forced into.
    #[serde(skip)]
    pub alternating_magnitude: Option<Rational>,
}

/// Inverts G through the recurrence
/// `x₁ = −lim y − y₁`, `x_{n+1} = (y_n − y_{n+1}) − x_n`.
///
/// Past the head of `y` the recurrence gives `x_{n+1} = −x_n`, so the candidate
/// lies in ℓ₁ iff it vanishes right after the head.
pub fn solve_g(y: &TailSeq) -> RangeCertificate {
    let target = Some(y.clone());
    let Some(lim) = y.limit() else {
        return RangeCertificate {
            target,
            feasible: false,
            preimage: None,
            obstruction: Some("not in c: tail does not converge".into()),
            alternating_magnitude: None,
        };
    };
    let h = y.head().len();
    let mut xs = Vec::with_capacity(h + 1);
    xs.push(-&lim - y.get(1));
    for n in 1..=h {
        let next = (y.get(n) - y.get(n + 1)) - &xs[n - 1];
        xs.push(next);
    }
    let boundary = xs[h].clone();
    if !boundary.is_zero() {
        let mag = num_traits::Signed::abs(&boundary);
        return RangeCertificate {
            target,
            feasible: false,
            preimage: None,
            obstruction: Some(format!(
                "preimage alternates with magnitude {} from index {} on; not summable",
                rational::to_text(&mag),
                h + 1
            )),
            alternating_magnitude: Some(mag),
        };
    }
    xs.pop();
    let x = SparseSeq::from_dense(&xs);
    debug_assert_eq!(&apply_g(&x), y);
    RangeCertificate {
        target,
        feasible: true,
        preimage: Some(x),
        obstruction: None,
        alternating_magnitude: None,
    }
}

/// Finds `x ∈ ℓ₁` with `⟨w, Gx⟩ = ⟨w, y⟩` for every test functional `w`.
///
/// The unknown is supported on `1..=m` with `m = tests + 2`, grown one index at
/// a time until the system is consistent. Free coordinates are set to zero.
pub fn weakstar_approximate(y: &TailSeq, tests: &[SparseSeq]) -> Result<SparseSeq> {
    if tests.is_empty() {
        return Ok(SparseSeq::zero());
    }
    let reach = tests.iter().map(SparseSeq::max_index).max().unwrap_or(0);
    let rhs: Vec<Rational> = tests.iter().map(|w| couple(w, y)).collect();
    let limit = reach + tests.len() + 2;
    // columns are indices 1..=m; entry (i, k) = ⟨wⁱ, G e_k⟩
    let columns: Vec<TailSeq> = (1..=limit).map(|k| apply_g(&SparseSeq::unit(k))).collect();
    for m in tests.len() + 2..=limit {
        let a: linalg::Matrix = tests
            .iter()
            .map(|w| columns[..m].iter().map(|g| couple(w, g)).collect())
            .collect();
        if let Some(sol) = linalg::solve(&a, &rhs, m) {
            return Ok(SparseSeq::from_dense(&sol));
        }
    }
    Err(LabError::Infeasible(format!(
        "no weak* approximant with support up to {limit}"
    )))
}

/// `‖G x⁽ᵐ⁾‖∞ / ‖x⁽ᵐ⁾‖₁` for the alternating vector of length `2m`.
pub fn range_ratio_family(m: usize) -> Rational {
    assert!(m >= 1, "m must be positive");
    let x = alternating(m);
    apply_g(&x).linf_norm() / x.l1_norm()
}

/// `(1, −1, 1, −1, …)` of length `2m`.
pub fn alternating(m: usize) -> SparseSeq {
    SparseSeq::from_entries((1..=2 * m).map(|n| {
        let v = if n % 2 == 1 { 1 } else { -1 };
        (n, rational::int(v))
    }))
    .expect("positive indices")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, q};

    /// Direct evaluation of the defining sums, independent of `apply_g`.
    fn g_entry_bruteforce(x: &SparseSeq, n: usize) -> Rational {
        x.iter().map(|(k, v)| v * int(alpha(k, n))).sum()
    }

    #[test]
    fn alpha_is_antisymmetric() {
        for k in 1..8 {
            for n in 1..8 {
                assert_eq!(alpha(k, n), -alpha(n, k));
            }
        }
        assert_eq!(alpha(3, 3), 0);
    }

    #[test]
    fn apply_g_examples() {
        assert!(apply_g(&SparseSeq::zero()).is_zero());
        let ge1 = apply_g(&SparseSeq::unit(1));
        assert_eq!(ge1, TailSeq::new(vec![int(0)], Tail::Constant(int(-1))).unwrap());
        let x = SparseSeq::from_dense(&[int(1), int(1)]);
        let expect = TailSeq::new(vec![int(1), int(-1)], Tail::Constant(int(-2))).unwrap();
        assert_eq!(apply_g(&x), expect);
    }

    #[test]
    fn apply_g_matches_bruteforce_sums() {
        let x = SparseSeq::from_entries([(2, q(3, 7)), (5, int(-4)), (9, q(1, 2))]).unwrap();
        let gx = apply_g(&x);
        for n in 1..20 {
            assert_eq!(gx.get(n), g_entry_bruteforce(&x, n), "n = {n}");
        }
    }

    #[test]
    fn neg_g_examples() {
        assert!(apply_neg_g(&SparseSeq::zero()).is_zero());
        let e = TailSeq::new(vec![int(0)], Tail::Constant(int(1))).unwrap();
        assert_eq!(apply_neg_g(&SparseSeq::unit(1)), e);
        let x = SparseSeq::from_dense(&[int(1), int(1)]);
        let e = TailSeq::new(vec![int(-1), int(1)], Tail::Constant(int(2))).unwrap();
        assert_eq!(apply_neg_g(&x), e);
    }

    #[test]
    fn solve_g_examples() {
        let x = SparseSeq::from_dense(&[int(1), int(1)]);
        let cert = solve_g(&apply_g(&x));
        assert!(cert.feasible);
        assert_eq!(cert.preimage, Some(x));

        let cert = solve_g(&TailSeq::ones());
        assert!(!cert.feasible);
        assert_eq!(cert.alternating_magnitude, Some(int(2)));

        let cert = solve_g(&TailSeq::zero());
        assert!(cert.feasible);
        assert_eq!(cert.preimage, Some(SparseSeq::zero()));
    }

    #[test]
    fn solve_g_rejects_non_convergent_targets() {
        let cert = solve_g(&TailSeq::periodic(vec![int(1), int(-1)]).unwrap());
        assert!(!cert.feasible);
        assert!(cert.obstruction.unwrap().contains("not in c"));
    }

    #[test]
    fn solve_g_unit_target_is_infeasible() {
        let e1 = TailSeq::from_sparse(&SparseSeq::unit(1));
        let cert = solve_g(&e1);
        assert!(!cert.feasible);
        assert_eq!(cert.alternating_magnitude, Some(int(2)));
    }

    #[test]
    fn certificate_json_omits_absent_fields() {
        let json = serde_json::to_string(&solve_g(&TailSeq::zero())).unwrap();
        assert_eq!(json, r#"{"feasible":true,"preimage":{"entries":[]}}"#);
    }

    #[test]
    fn weakstar_examples() {
        let x = weakstar_approximate(&TailSeq::ones(), &[SparseSeq::unit(1)]).unwrap();
        assert_eq!(x, SparseSeq::unit(2));
        assert!(weakstar_approximate(&TailSeq::ones(), &[]).unwrap().is_zero());
        let tests = [SparseSeq::unit(1), SparseSeq::unit(2)];
        assert!(weakstar_approximate(&TailSeq::zero(), &tests).unwrap().is_zero());
    }

    #[test]
    fn weakstar_matches_oscillating_targets() {
        let y = TailSeq::periodic(vec![int(1), int(-1)]).unwrap();
        let tests: Vec<SparseSeq> = (1..=6).map(SparseSeq::unit).collect();
        let x = weakstar_approximate(&y, &tests).unwrap();
        let gx = apply_g(&x);
        for w in &tests {
            assert_eq!(couple(w, &gx), couple(w, &y));
        }
    }

    #[test]
    fn range_ratio_examples() {
        assert_eq!(range_ratio_family(1), q(1, 2));
        assert_eq!(range_ratio_family(2), q(1, 4));
        assert!(range_ratio_family(100) <= q(1, 100));
    }
}
