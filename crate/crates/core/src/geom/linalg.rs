//! Dense Gaussian elimination over an abstract field.
//!
//! The same routines serve exact rational arithmetic (certificates) and
//! `f64` (local search guidance). Exact fields pivot on the first nonzero
//! entry; floating fields use partial pivoting and a small absolute
//! threshold for rank decisions.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

use super::Rational;
use crate::error::{Result, TverbergError};

pub trait Field: Num + Signed + Clone + PartialOrd + Debug {
    const EXACT: bool;

    /// Zero for rank decisions.
    fn is_negligible(&self) -> bool;

    fn to_f64(&self) -> f64;

    fn from_rational(r: &Rational) -> Self;
}

impl Field for Rational {
    const EXACT: bool = true;

    fn is_negligible(&self) -> bool {
        num_traits::Zero::is_zero(self)
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
}

/// Absolute threshold below which a float is treated as zero. Callers in
/// float mode work on coordinates normalized to unit scale.
pub const FLOAT_EPS: f64 = 1e-11;

impl Field for f64 {
    const EXACT: bool = false;

    fn is_negligible(&self) -> bool {
        self.abs() <= FLOAT_EPS
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn from_rational(r: &Rational) -> Self {
        ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
    }
}

/// Reduces `rows` (each of length `cols`) to reduced row echelon form in
/// place and returns the pivot column of each pivot row.
pub fn rref<T: Field>(rows: &mut [Vec<T>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let pick = if T::EXACT {
            (r..rows.len()).find(|&i| !rows[i][c].is_negligible())
        } else {
            (r..rows.len())
                .filter(|&i| !rows[i][c].is_negligible())
                .max_by(|&a, &b| {
                    rows[a][c]
                        .abs()
                        .partial_cmp(&rows[b][c].abs())
                        .unwrap_or(std::cmp::Ordering::Equal)
                })
        };
        let Some(p) = pick else {
            if !T::EXACT {
                for row in rows[r..].iter_mut() {
                    row[c] = T::zero();
                }
            }
            continue;
        };
        rows.swap(r, p);
        let inv = T::one() / rows[r][c].clone();
        for x in rows[r].iter_mut().skip(c) {
            *x = x.clone() * inv.clone();
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row).skip(c) {
                if !p.is_zero() {
                    *x = x.clone() - f.clone() * p.clone();
                }
            }
            row[c] = T::zero();
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Outcome of solving a general (possibly non-square) linear system.
#[derive(Debug, Clone, PartialEq)]
pub enum SystemSolution<T> {
    Unique(Vec<T>),
    /// Consistent but rank deficient: one particular solution plus a
    /// nonzero direction of the null space.
    Underdetermined { particular: Vec<T>, null_vector: Vec<T> },
    Inconsistent,
}

/// Solves `a x = b` for an `m x n` matrix `a`.
pub fn solve_system<T: Field>(a: &[Vec<T>], b: &[T], n: usize) -> Result<SystemSolution<T>> {
    if a.len() != b.len() {
        return Err(TverbergError::DimensionMismatch { expected: a.len(), found: b.len() });
    }
    let mut rows: Vec<Vec<T>> = Vec::with_capacity(a.len());
    for (row, rhs) in a.iter().zip(b) {
        if row.len() != n {
            return Err(TverbergError::DimensionMismatch { expected: n, found: row.len() });
        }
        let mut aug = row.clone();
        aug.push(rhs.clone());
        rows.push(aug);
    }
    let pivots = rref(&mut rows, n + 1);
    if pivots.last() == Some(&n) {
        return Ok(SystemSolution::Inconsistent);
    }
    if !T::EXACT && rows.iter().skip(pivots.len()).any(|r| !r[n].is_negligible()) {
        return Ok(SystemSolution::Inconsistent);
    }
    let mut particular = vec![T::zero(); n];
    for (r, &c) in pivots.iter().enumerate() {
        particular[c] = rows[r][n].clone();
    }
    if pivots.len() == n {
        return Ok(SystemSolution::Unique(particular));
    }
    let null_vector = null_from_rref(&rows, &pivots, n);
    Ok(SystemSolution::Underdetermined { particular, null_vector })
}

fn null_from_rref<T: Field>(rows: &[Vec<T>], pivots: &[usize], n: usize) -> Vec<T> {
    let free = (0..n).find(|c| !pivots.contains(c)).expect("rank deficient");
    let mut v = vec![T::zero(); n];
    v[free] = T::one();
    for (r, &c) in pivots.iter().enumerate() {
        v[c] = -rows[r][free].clone();
    }
    v
}

/// A nonzero vector `x` with `a x = 0`, if one exists.
pub fn null_vector<T: Field>(a: &[Vec<T>], n: usize) -> Option<Vec<T>> {
    let mut rows: Vec<Vec<T>> = a.to_vec();
    let pivots = rref(&mut rows, n);
    if pivots.len() == n {
        return None;
    }
    Some(null_from_rref(&rows, &pivots, n))
}

/// A nonzero integer vector `x` with `a x = 0`, if one exists, divided by
/// the gcd of its entries. Fraction-free Gauss-Jordan elimination keeps every
/// intermediate entry a minor of `a`.
pub fn integer_null_vector(a: &[Vec<BigInt>], n: usize) -> Option<Vec<BigInt>> {
    let mut m: Vec<Vec<BigInt>> = a.to_vec();
    let rows = m.len();
    let mut pivots: Vec<usize> = Vec::new();
    let mut prev = BigInt::one();
    for c in 0..n {
        let r = pivots.len();
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(p, r);
        let piv = m[r][c].clone();
        for i in 0..rows {
            if i == r {
                continue;
            }
            let f = m[i][c].clone();
            for j in 0..n {
                let v = &piv * &m[i][j] - &f * &m[r][j];
                m[i][j] = v / &prev;
            }
        }
        prev = piv;
        pivots.push(c);
    }
    let free = (0..n).find(|c| !pivots.contains(c))?;
    let mut x = vec![BigInt::zero(); n];
    // Every pivot entry now equals `prev`.
    x[free] = prev.clone();
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = -m[r][free].clone();
    }
    let g = x.iter().fold(BigInt::zero(), |g, v| g.gcd(v));
    x.iter_mut().for_each(|v| *v /= &g);
    Some(x)
}

/// Solution of a square system, or a null-space witness when singular.
#[derive(Debug, Clone, PartialEq)]
pub enum LinearSolution<T> {
    Solved(Vec<T>),
    RankDeficient { null_vector: Vec<T> },
}

/// Solves the square system `a x = b`.
pub fn solve_linear<T: Field>(a: &[Vec<T>], b: &[T]) -> Result<LinearSolution<T>> {
    let m = a.len();
    if b.len() != m {
        return Err(TverbergError::DimensionMismatch { expected: m, found: b.len() });
    }
    if let Some(row) = a.iter().find(|r| r.len() != m) {
        return Err(TverbergError::DimensionMismatch { expected: m, found: row.len() });
    }
    if let Some(null_vector) = null_vector(a, m) {
        return Ok(LinearSolution::RankDeficient { null_vector });
    }
    match solve_system(a, b, m)? {
        SystemSolution::Unique(x) => Ok(LinearSolution::Solved(x)),
        _ => Err(TverbergError::Internal("nonsingular system without unique solution".into())),
    }
}

/// Determinant by fraction-free style elimination over the field.
pub fn determinant<T: Field>(a: &[Vec<T>]) -> T {
    let n = a.len();
    let mut m: Vec<Vec<T>> = a.to_vec();
    let mut det = T::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return T::zero();
        };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        let piv = m[c][c].clone();
        det = det * piv.clone();
        for i in c + 1..n {
            if m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone() / piv.clone();
            for j in c..n {
                let v = m[c][j].clone();
                m[i][j] = m[i][j].clone() - f.clone() * v;
            }
        }
    }
    det
}
