//! Exact Gauss–Jordan elimination over the rationals.

use num_traits::{One, Zero};

use crate::rational::Rational;

/// Dense row-major matrix.
pub type Matrix = Vec<Vec<Rational>>;

/// Reduced row echelon form, in place. Returns the pivot columns.
pub fn rref(m: &mut Matrix, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == m.len() {
            break;
        }
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = Rational::one() / &m[row][col];
        for v in m[row].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = m[row].clone();
        for (r, other) in m.iter_mut().enumerate() {
            if r == row || other[col].is_zero() {
                continue;
            }
            let factor = other[col].clone();
            for (v, pv) in other.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &factor * pv;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

pub fn rank(m: &Matrix, cols: usize) -> usize {
    rref(&mut m.clone(), cols).len()
}

/// Solves `a·x = b`. Free variables are set to zero, so among all solutions the
/// returned one is supported on the leftmost pivot columns.
pub fn solve(a: &Matrix, b: &[Rational], cols: usize) -> Option<Vec<Rational>> {
    assert_eq!(a.len(), b.len());
    let mut aug: Matrix = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug, cols + 1);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![Rational::zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = aug[r][cols].clone();
    }
    Some(x)
}

/// Basis of `{x : a·x = 0}`, one vector per free column.
pub fn nullspace(a: &Matrix, cols: usize) -> Vec<Vec<Rational>> {
    let mut m = a.clone();
    let pivots = rref(&mut m, cols);
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Rational::zero(); cols];
        v[free] = Rational::one();
        for (r, &p) in pivots.iter().enumerate() {
            v[p] = -m[r][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Row-reduced spanning set supporting cheap membership tests.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Span {
    rows: Matrix,
    pivots: Vec<usize>,
}

impl Span {
    pub fn new(vectors: &[Vec<Rational>], dim: usize) -> Self {
        let mut rows = vectors.to_vec();
        let pivots = rref(&mut rows, dim);
        rows.truncate(pivots.len());
        Self { rows, pivots }
    }

    pub fn dimension(&self) -> usize {
        self.rows.len()
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        let mut r = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if r[p].is_zero() {
                continue;
            }
            let f = r[p].clone();
            for (x, b) in r.iter_mut().zip(row) {
                if !b.is_zero() {
                    *x -= &f * b;
                }
            }
        }
        r.iter().all(Zero::is_zero)
    }
}

/// Whether `v` lies in the span of `basis`.
pub fn in_span(basis: &[Vec<Rational>], v: &[Rational]) -> bool {
    if v.iter().all(Zero::is_zero) {
        return true;
    }
    if basis.is_empty() {
        return false;
    }
    let cols = basis.len();
    let a: Matrix = (0..v.len())
        .map(|i| basis.iter().map(|b| b[i].clone()).collect())
        .collect();
    solve(&a, v, cols).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn mat(rows: &[&[i64]]) -> Matrix {
        rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect()
    }

    fn mul(a: &Matrix, x: &[Rational]) -> Vec<Rational> {
        a.iter()
            .map(|r| r.iter().zip(x).map(|(p, q)| p * q).sum())
            .collect()
    }

    #[test]
    fn nullspace_vectors_are_annihilated() {
        let a = mat(&[&[1, 2, 3, 4], &[2, 4, 6, 8], &[0, 1, 1, 0]]);
        let ns = nullspace(&a, 4);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(mul(&a, v).iter().all(Zero::is_zero));
        }
        assert_eq!(rank(&a, 4), 2);
    }

    #[test]
    fn solve_prefers_leftmost_pivots() {
        let a = mat(&[&[0, 1, 1]]);
        assert_eq!(solve(&a, &[int(1)], 3).unwrap(), vec![int(0), int(1), int(0)]);
        let inconsistent = mat(&[&[1, 1], &[2, 2]]);
        assert!(solve(&inconsistent, &[int(1), int(3)], 2).is_none());
    }

    #[test]
    fn span_membership() {
        let basis = vec![vec![int(1), int(0), int(1)], vec![int(0), int(1), int(1)]];
        assert!(in_span(&basis, &[int(2), int(3), int(5)]));
        assert!(!in_span(&basis, &[int(1), int(1), int(1)]));
        assert!(in_span(&[], &[int(0), int(0)]));
        assert!(!in_span(&[], &[int(1)]));

        let span = Span::new(&basis, 3);
        assert_eq!(span.dimension(), 2);
        assert!(span.contains(&[int(2), int(3), int(5)]));
        assert!(!span.contains(&[int(1), int(1), int(1)]));
    }
}
