//! Tverberg partitions by projection: solve in the plane of the first two
//! coordinates, lift, and recurse on the remaining coordinates.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{Result, TverbergError};
use crate::geom::{weighted_sum, Point, PointSet, Rational};
use crate::kernel::{sparsify, ConvexCombination};
use crate::planar::birch_partition;
use crate::sites::{Batch, Site};

/// A site of rank at least `floor(n / 3^(d/2))` for even `d` and
/// `floor(n / (2 * 3^((d-1)/2)))` for odd `d`.
pub fn project_tverberg(set: &PointSet) -> Result<Site> {
    let d = set.dim();
    if d < 2 {
        return Err(TverbergError::Precondition(format!("projection needs d >= 2, got {d}")));
    }
    if d == 2 {
        return birch_partition(set);
    }
    if d % 2 == 0 {
        even(set)
    } else {
        odd(set)
    }
}

/// The point `sum w_i p_i` of a batch witness.
fn lifted(b: &Batch, set: &PointSet) -> Point {
    weighted_sum(set.dim(), b.witness.weights.iter().map(|(&i, w)| (set.point(i), w)))
}

/// Combines groups of batches with the given coefficients into one
/// combination over `set`, reduced to at most `d+1` points.
fn combine(parts: &[(&Batch, Rational)], target: &Point, set: &PointSet) -> Batch {
    let mut weights: BTreeMap<usize, Rational> = BTreeMap::new();
    for (b, a) in parts {
        for (&i, w) in &b.witness.weights {
            *weights.entry(i).or_insert_with(Rational::zero) += a * w;
        }
    }
    Batch::from_combination(sparsify(&ConvexCombination { weights, target: target.clone() }, set))
}

fn finish(point: Point, batches: Vec<Batch>, n: usize) -> Site {
    let mut used = vec![false; n];
    for b in &batches {
        b.indices.iter().for_each(|&i| used[i] = true);
    }
    Site::new(point, batches, (0..n).filter(|&i| !used[i]).collect())
}

fn even(set: &PointSet) -> Result<Site> {
    let d = set.dim();
    let base = birch_partition(&set.project(0..2))?;
    let c = base.point.coords();
    // Each lifted triangle meets the subspace over c at its witness point.
    let lifts: Vec<Point> = base.log.batches.iter().map(|b| lifted(b, set)).collect();
    if let Some(j) = lifts.iter().position(|p| &p.coords()[..2] != c) {
        return Err(TverbergError::Internal(format!("lifted triangle {j} misses the planar point")));
    }
    let reps = PointSet::with_dim(d - 2, lifts.iter().map(|p| p.project(2..d)).collect())?;
    let top = project_tverberg(&reps)?;
    let point = Point::new(c.iter().chain(top.point.coords()).cloned().collect());
    let batches = top
        .log
        .batches
        .iter()
        .map(|tb| {
            let parts: Vec<(&Batch, Rational)> =
                tb.witness.weights.iter().map(|(&j, w)| (&base.log.batches[j], w.clone())).collect();
            combine(&parts, &point, set)
        })
        .collect();
    Ok(finish(point, batches, set.len()))
}

fn odd(set: &PointSet) -> Result<Site> {
    let d = set.dim();
    let base = project_tverberg(&set.project(0..d - 1))?;
    let heights: Vec<Rational> = base.log.batches.iter().map(|b| lifted(b, set).coords()[d - 1].clone()).collect();
    let k = heights.len();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| heights[a].cmp(&heights[b]).then(a.cmp(&b)));
    let t = if k == 0 { Rational::zero() } else { heights[order[(k - 1) / 2]].clone() };
    let point = Point::new(base.point.coords().iter().cloned().chain([t.clone()]).collect());
    let mut batches = Vec::with_capacity(k.div_ceil(2));
    for i in 0..k / 2 {
        let (lo, hi) = (order[i], order[k - 1 - i]);
        let span = &heights[hi] - &heights[lo];
        let a = if span.is_zero() { Rational::from_integer(1.into()) } else { (&heights[hi] - &t) / &span };
        let b = Rational::from_integer(1.into()) - &a;
        let parts = [(&base.log.batches[lo], a), (&base.log.batches[hi], b)];
        batches.push(combine(&parts, &point, set));
    }
    if k % 2 == 1 {
        // The median batch reaches the lifted point on its own.
        let m = &base.log.batches[order[k / 2]];
        batches.push(combine(&[(m, Rational::from_integer(1.into()))], &point, set));
    }
    Ok(finish(point, batches, set.len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::verify_site;
    use rand::Rng;

    fn random_set(seed: u64, n: usize, d: usize) -> PointSet {
        let mut rng = crate::random::rng(seed);
        PointSet::from_ints(&(0..n).map(|_| (0..d).map(|_| rng.random_range(-1_000_000..1_000_000)).collect()).collect::<Vec<_>>())
            .unwrap()
    }

    fn check(d: usize, n: usize, divisor: usize, seed: u64) {
        let set = random_set(seed, n, d);
        let site = project_tverberg(&set).unwrap();
        let r = verify_site(&set, &site);
        assert!(r.valid, "{:?}", r.violations);
        assert!(site.rank() >= n / divisor, "d={d} n={n} rank={}", site.rank());
        assert_eq!(site.log.indices().count() + site.unused.len(), n);
    }

    #[test]
    fn planar_passthrough() {
        let set = random_set(1, 30, 2);
        assert_eq!(project_tverberg(&set).unwrap().rank(), 10);
    }

    #[test]
    fn depth_by_dimension() {
        check(3, 60, 6, 2);
        check(4, 90, 9, 3);
        check(5, 180, 18, 4);
        check(6, 270, 27, 5);
    }

    #[test]
    fn uneven_sizes() {
        for (d, n, s) in [(3, 61, 6), (3, 65, 6), (4, 97, 9), (5, 100, 18)] {
            check(d, n, s, 40 + n as u64);
        }
    }

    #[test]
    fn rejects_lines() {
        let set = PointSet::from_ints(&[vec![0], vec![1], vec![2]]).unwrap();
        assert!(project_tverberg(&set).is_err());
    }
}
