//! Radon partitions, Carathéodory sparsification and exact LP feasibility.

mod hull;
pub mod lp;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Result, TverbergError};
use crate::geom::linalg::integer_null_vector;
use crate::geom::{weighted_sum, Point, PointSet, Rational};

pub use hull::{common_point, hull_membership, CommonPoint, HullMembership, SeparationWitness};

/// Sparse convex coefficients over indices of a [`PointSet`] together with
/// the point they reproduce. Only strictly positive weights are stored.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvexCombination {
    pub weights: BTreeMap<usize, Rational>,
    pub target: Point,
}

impl ConvexCombination {
    /// Builds the combination and computes its target. Zero weights are
    /// dropped.
    pub fn from_weights(weights: impl IntoIterator<Item = (usize, Rational)>, set: &PointSet) -> Self {
        let weights: BTreeMap<usize, Rational> = weights.into_iter().filter(|(_, w)| !w.is_zero()).collect();
        let target = weighted_sum(set.dim(), weights.iter().map(|(&i, w)| (set.point(i), w)));
        ConvexCombination { weights, target }
    }

    pub fn vertex(i: usize, set: &PointSet) -> Self {
        ConvexCombination { weights: BTreeMap::from([(i, Rational::one())]), target: set.point(i).clone() }
    }

    pub fn support(&self) -> Vec<usize> {
        self.weights.keys().copied().collect()
    }

    pub fn support_len(&self) -> usize {
        self.weights.len()
    }

    /// Every way in which this is not an exact convex combination of
    /// `set` reproducing `target`.
    pub fn violations(&self, set: &PointSet) -> Vec<String> {
        let mut out = Vec::new();
        if let Some(&i) = self.weights.keys().find(|&&i| i >= set.len()) {
            out.push(format!("weight on out-of-range index {i}"));
            return out;
        }
        if self.target.dim() != set.dim() {
            out.push(format!("target has dimension {}, points have {}", self.target.dim(), set.dim()));
            return out;
        }
        for (i, w) in &self.weights {
            if w.is_negative() {
                out.push(format!("negative weight {w} on index {i}"));
            }
        }
        let sum: Rational = self.weights.values().sum();
        if !sum.is_one() {
            out.push(format!("weights sum to {sum}, not 1"));
        }
        let back = weighted_sum(set.dim(), self.weights.iter().map(|(&i, w)| (set.point(i), w)));
        if back != self.target {
            out.push(format!("weights reproduce {back:?}, not {:?}", self.target));
        }
        out
    }
}

/// A Radon partition of `d+2` points. Sides hold positions within the
/// input slice.
#[derive(Clone, Debug, PartialEq)]
pub struct RadonResult {
    pub side_a: Vec<usize>,
    pub side_b: Vec<usize>,
    pub point: Point,
    /// Weights over `side_a` positions.
    pub weights_a: BTreeMap<usize, Rational>,
    /// Weights over `side_b` positions.
    pub weights_b: BTreeMap<usize, Rational>,
}

/// Affine dependency `sum l_i p_i = 0`, `sum l_i = 0` with the first
/// nonzero entry positive.
/// Integer `lambda`, not all zero, with `sum lambda_i p_i = 0` and `sum lambda_i = 0`.
pub(crate) fn integer_affine_dependency(points: &[&Point]) -> Option<Vec<BigInt>> {
    let d = points[0].dim();
    let m = points.len();
    // Column i scaled by the common denominator of point i; the integer
    // dependency found there is the rational one times those scales.
    let scales: Vec<BigInt> = points
        .iter()
        .map(|p| p.coords().iter().fold(BigInt::one(), |l, c| l.lcm(c.denom())))
        .collect();
    let mut rows: Vec<Vec<BigInt>> = (0..d)
        .map(|c| points.iter().zip(&scales).map(|(p, s)| p.coords()[c].numer() * (s / p.coords()[c].denom())).collect())
        .collect();
    rows.push(scales.clone());
    let mu = integer_null_vector(&rows, m)?;
    let mut lambda: Vec<BigInt> = mu.into_iter().zip(&scales).map(|(u, s)| u * s).collect();
    if lambda.iter().find(|l| !l.is_zero()).is_some_and(|l| l.is_negative()) {
        lambda.iter_mut().for_each(|l| *l = -&*l);
    }
    Some(lambda)
}

fn affine_dependency(points: &[&Point]) -> Option<Vec<Rational>> {
    Some(integer_affine_dependency(points)?.into_iter().map(Rational::from_integer).collect())
}

pub fn radon_partition(points: &[Point]) -> Result<RadonResult> {
    let d = points.first().map(Point::dim).unwrap_or(0);
    if points.len() != d + 2 {
        return Err(TverbergError::DimensionMismatch { expected: d + 2, found: points.len() });
    }
    if let Some(p) = points.iter().find(|p| p.dim() != d) {
        return Err(TverbergError::DimensionMismatch { expected: d, found: p.dim() });
    }
    let refs: Vec<&Point> = points.iter().collect();
    let lambda = affine_dependency(&refs).ok_or_else(|| TverbergError::Internal("d+2 points always admit an affine dependency".into()))?;
    let total: Rational = lambda.iter().filter(|l| l.is_positive()).sum();
    let mut side_a = Vec::new();
    let mut side_b = Vec::new();
    let mut weights_a = BTreeMap::new();
    let mut weights_b = BTreeMap::new();
    for (i, l) in lambda.iter().enumerate() {
        if l.is_negative() {
            side_b.push(i);
            weights_b.insert(i, -l / &total);
        } else {
            side_a.push(i);
            if l.is_positive() {
                weights_a.insert(i, l / &total);
            }
        }
    }
    let point = weighted_sum(d, weights_a.iter().map(|(&i, w)| (&points[i], w)));
    Ok(RadonResult { side_a, side_b, point, weights_a, weights_b })
}

/// Reduces the support of `comb` to at most `d+1` points, keeping the
/// target. Each step removes at least one point using the affine
/// dependency of `d+2` support points.
pub fn sparsify(comb: &ConvexCombination, set: &PointSet) -> ConvexCombination {
    let d = set.dim();
    let mut weights = comb.weights.clone();
    weights.retain(|_, w| !w.is_zero());
    if weights.len() <= d + 1 {
        return ConvexCombination { weights, target: comb.target.clone() };
    }
    // Integer numerators over the common denominator `den`.
    let mut den = weights.values().fold(BigInt::one(), |l, w| l.lcm(w.denom()));
    let mut nums: BTreeMap<usize, BigInt> = weights.iter().map(|(&i, w)| (i, w.numer() * (&den / w.denom()))).collect();
    while nums.len() > d + 1 {
        let idx: Vec<usize> = nums.keys().copied().take(d + 2).collect();
        let pts: Vec<&Point> = idx.iter().map(|&i| set.point(i)).collect();
        let lambda = integer_affine_dependency(&pts).expect("d+2 points are affinely dependent");
        // Largest t keeping w - t * lambda nonnegative is nums[k] / lambda[k].
        let k = (0..idx.len())
            .filter(|&j| lambda[j].is_positive())
            .min_by(|&a, &b| (&nums[&idx[a]] * &lambda[b]).cmp(&(&nums[&idx[b]] * &lambda[a])))
            .expect("affine dependency has a positive entry");
        let (wk, lk) = (nums[&idx[k]].clone(), lambda[k].clone());
        nums.values_mut().for_each(|w| *w *= &lk);
        for (i, l) in idx.iter().zip(&lambda) {
            if !l.is_zero() {
                *nums.get_mut(i).unwrap() -= &wk * l;
            }
        }
        den *= &lk;
        nums.retain(|_, w| !w.is_zero());
        let g = nums.values().fold(den.clone(), |g, w| g.gcd(w));
        nums.values_mut().for_each(|w| *w /= &g);
        den /= &g;
    }
    let weights = nums.into_iter().map(|(i, w)| (i, Rational::new(w, den.clone()))).collect();
    ConvexCombination { weights, target: comb.target.clone() }
}
