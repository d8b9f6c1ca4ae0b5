//! Exact Gaussian elimination over rational and cyclotomic scalars.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::scalars::CycScalar;

/// Minimal field interface used by the elimination routines.
pub trait Field: Clone + PartialEq {
    fn f_zero() -> Self;
    fn f_one() -> Self;
    fn f_is_zero(&self) -> bool;
    fn f_sub(&self, other: &Self) -> Self;
    fn f_mul(&self, other: &Self) -> Self;
    fn f_inv(&self) -> Self;
}

impl Field for BigRational {
    fn f_zero() -> Self {
        BigRational::zero()
    }
    fn f_one() -> Self {
        BigRational::one()
    }
    fn f_is_zero(&self) -> bool {
        self.is_zero()
    }
    fn f_sub(&self, other: &Self) -> Self {
        self - other
    }
    fn f_mul(&self, other: &Self) -> Self {
        self * other
    }
    fn f_inv(&self) -> Self {
        self.recip()
    }
}

impl Field for CycScalar {
    fn f_zero() -> Self {
        CycScalar::zero()
    }
    fn f_one() -> Self {
        CycScalar::one()
    }
    fn f_is_zero(&self) -> bool {
        self.is_zero()
    }
    fn f_sub(&self, other: &Self) -> Self {
        self - other
    }
    fn f_mul(&self, other: &Self) -> Self {
        self * other
    }
    fn f_inv(&self) -> Self {
        self.inv().expect("pivot is nonzero")
    }
}

/// Reduces `rows` in place to reduced row echelon form, dropping zero rows.
/// Returns the pivot column of each remaining row.
pub fn rref<F: Field>(rows: &mut Vec<Vec<F>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].f_is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][col].f_inv();
        if !inv.f_is_zero() && inv != F::f_one() {
            for x in rows[r].iter_mut().skip(col) {
                *x = x.f_mul(&inv);
            }
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[col].f_is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row).skip(col) {
                if !p.f_is_zero() {
                    *x = x.f_sub(&factor.f_mul(p));
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

pub fn rank<F: Field>(rows: &[Vec<F>]) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m).len()
}

pub fn rank_rational(rows: &[Vec<BigRational>]) -> usize {
    rank(rows)
}

/// Canonical basis of the null space `{x : A x = 0}`, one vector per free column.
pub fn kernel<F: Field>(rows: &[Vec<F>], ncols: usize) -> Vec<Vec<F>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m);
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![F::f_zero(); ncols];
        v[free] = F::f_one();
        for (row, &pc) in m.iter().zip(&pivots) {
            if !row[free].f_is_zero() {
                v[pc] = F::f_zero().f_sub(&row[free]);
            }
        }
        basis.push(v);
    }
    basis
}

/// Inverse of a square matrix, or `None` when singular.
pub fn invert<F: Field>(m: &[Vec<F>]) -> Option<Vec<Vec<F>>> {
    let n = m.len();
    let mut aug: Vec<Vec<F>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { F::f_one() } else { F::f_zero() }));
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn invert_rational(m: &[Vec<BigRational>]) -> Option<Vec<Vec<BigRational>>> {
    if m.is_empty() {
        return Some(Vec::new());
    }
    invert(m)
}

/// Canonical echelon basis of the span of `vectors`.
pub fn span_basis<F: Field>(vectors: &[Vec<F>]) -> Vec<Vec<F>> {
    let mut m = vectors.to_vec();
    rref(&mut m);
    m
}

/// Dimension of the intersection of two subspaces given by spanning sets.
pub fn intersection_dim<F: Field>(a: &[Vec<F>], b: &[Vec<F>]) -> usize {
    let ra = rank(a);
    let rb = rank(b);
    let mut both = a.to_vec();
    both.extend_from_slice(b);
    ra + rb - rank(&both)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn rank_and_kernel() {
        let m = vec![
            vec![q(1), q(2), q(3)],
            vec![q(2), q(4), q(6)],
            vec![q(0), q(1), q(1)],
        ];
        assert_eq!(rank(&m), 2);
        let k = kernel(&m, 3);
        assert_eq!(k.len(), 1);
        for row in &m {
            let dot: BigRational = row.iter().zip(&k[0]).map(|(a, b)| a * b).sum();
            assert!(dot.is_zero());
        }
    }

    #[test]
    fn inverse_round_trip() {
        let m = vec![vec![q(2), q(1)], vec![q(1), q(1)]];
        let inv = invert_rational(&m).unwrap();
        assert_eq!(inv, vec![vec![q(1), q(-1)], vec![q(-1), q(2)]]);
        assert!(invert_rational(&[vec![q(1), q(1)], vec![q(1), q(1)]]).is_none());
    }

    #[test]
    fn cyclotomic_rank() {
        let i = CycScalar::root_of_unity(1, 4).unwrap();
        let one = CycScalar::one();
        let m = vec![vec![one.clone(), i.clone()], vec![i.clone(), -one.clone()]];
        assert_eq!(rank(&m), 1);
        assert_eq!(intersection_dim(&m[..1], &m[1..]), 1);
    }
}
