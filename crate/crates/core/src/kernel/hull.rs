use num_traits::{One, Zero};

use super::lp::{solve_standard, SparseColumn, StandardForm, StandardOutcome};
use super::{sparsify, ConvexCombination};
use crate::error::{Result, TverbergError};
use crate::geom::{Point, PointSet, Rational};

/// A hyperplane with every point of the set on the closed side
/// `<normal, p> <= offset` and the query strictly beyond it.
#[derive(Clone, Debug, PartialEq)]
pub struct SeparationWitness {
    pub normal: Vec<Rational>,
    pub offset: Rational,
}

impl SeparationWitness {
    pub fn separates(&self, q: &Point, set: &PointSet) -> bool {
        let side = |p: &Point| -> Rational { self.normal.iter().zip(p.coords()).map(|(a, b)| a * b).sum() };
        self.normal.iter().any(|c| !c.is_zero())
            && side(q) > self.offset
            && set.points().iter().all(|p| side(p) <= self.offset)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum HullMembership {
    /// Support at most `d+1`.
    Inside(ConvexCombination),
    Outside(SeparationWitness),
}

/// Decides `q` in `hull(set)` with the LP over the convex coefficients.
pub fn hull_membership(q: &Point, set: &PointSet) -> Result<HullMembership> {
    set.check_dim(q)?;
    let d = set.dim();
    if set.is_empty() {
        let mut normal = vec![Rational::zero(); d];
        normal[0] = Rational::one();
        return Ok(HullMembership::Outside(SeparationWitness {
            normal,
            offset: &q.coords()[0] - Rational::one(),
        }));
    }
    let columns: Vec<SparseColumn> = set
        .points()
        .iter()
        .map(|p| {
            let mut col: SparseColumn =
                p.coords().iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i, c.clone())).collect();
            col.push((d, Rational::one()));
            col
        })
        .collect();
    let mut rhs = q.coords().to_vec();
    rhs.push(Rational::one());
    let sf = StandardForm { rows: d + 1, columns, rhs, initial: Vec::new() };
    Ok(match solve_standard(&sf) {
        StandardOutcome::Feasible(x) => {
            let comb = ConvexCombination { weights: nonzero(x.into_iter().enumerate()), target: q.clone() };
            HullMembership::Inside(sparsify(&comb, set))
        }
        StandardOutcome::Infeasible(y) => {
            // y = (w, c) with <w, p> + c >= 0 on the set and <w, q> + c < 0.
            let normal = y[..d].iter().map(|v| -v.clone()).collect();
            HullMembership::Outside(SeparationWitness { normal, offset: y[d].clone() })
        }
    })
}

fn nonzero(it: impl Iterator<Item = (usize, Rational)>) -> std::collections::BTreeMap<usize, Rational> {
    it.filter(|(_, w)| !w.is_zero()).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub enum CommonPoint {
    /// One combination per batch, each with support at most `d+1`.
    Feasible { point: Point, combinations: Vec<ConvexCombination> },
    Infeasible,
}

/// Finds a point in the intersection of the hulls of `batches`.
pub fn common_point(batches: &[Vec<usize>], set: &PointSet) -> Result<CommonPoint> {
    if batches.is_empty() || batches.iter().any(Vec::is_empty) {
        return Err(TverbergError::Precondition("common_point needs nonempty batches".into()));
    }
    if let Some(&i) = batches.iter().flatten().find(|&&i| i >= set.len()) {
        return Err(TverbergError::Precondition(format!("index {i} out of range")));
    }
    let d = set.dim();
    let k = batches.len();
    // Rows: for batch b, d coordinate rows (sum_i l_bi p_i - q = 0) and one
    // row sum_i l_bi = 1. The free point q is split into q+ - q-.
    let rows = k * (d + 1);
    let mut columns: Vec<SparseColumn> = Vec::new();
    let mut owner: Vec<(usize, usize)> = Vec::new();
    for (b, batch) in batches.iter().enumerate() {
        for &i in batch {
            let mut col: SparseColumn = set
                .point(i)
                .coords()
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(c, v)| (b * (d + 1) + c, v.clone()))
                .collect();
            col.push((b * (d + 1) + d, Rational::one()));
            columns.push(col);
            owner.push((b, i));
        }
    }
    let first_free = columns.len();
    for c in 0..d {
        let plus: SparseColumn = (0..k).map(|b| (b * (d + 1) + c, -Rational::one())).collect();
        let minus = (0..k).map(|b| (b * (d + 1) + c, Rational::one())).collect();
        columns.push(plus);
        columns.push(minus);
    }
    let rhs = (0..rows).map(|r| if r % (d + 1) == d { Rational::one() } else { Rational::zero() }).collect();
    let sf = StandardForm { rows, columns, rhs, initial: (first_free..first_free + 2 * d).collect() };
    Ok(match solve_standard(&sf) {
        StandardOutcome::Infeasible(_) => CommonPoint::Infeasible,
        StandardOutcome::Feasible(x) => {
            let point = Point::new((0..d).map(|c| &x[first_free + 2 * c] - &x[first_free + 2 * c + 1]).collect());
            let mut weights = vec![std::collections::BTreeMap::new(); k];
            for (j, &(b, i)) in owner.iter().enumerate() {
                if !x[j].is_zero() {
                    *weights[b].entry(i).or_insert_with(Rational::zero) += &x[j];
                }
            }
            let combinations = weights
                .into_iter()
                .map(|w| sparsify(&ConvexCombination { weights: w, target: point.clone() }, set))
                .collect();
            CommonPoint::Feasible { point, combinations }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::rat;
    use rand::Rng;

    #[test]
    fn vertex_is_inside_with_unit_weight() {
        let set = PointSet::from_ints(&[vec![0, 0], vec![4, 0], vec![0, 4], vec![3, 3]]).unwrap();
        match hull_membership(&Point::from_ints(&[4, 0]), &set).unwrap() {
            HullMembership::Inside(c) => {
                assert_eq!(c.weights.len(), 1);
                assert_eq!(c.weights[&1], Rational::one());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn far_point_is_separated() {
        let set = PointSet::from_ints(&[vec![0, 0], vec![4, 0], vec![0, 4]]).unwrap();
        let q = Point::from_ints(&[10, -7]);
        match hull_membership(&q, &set).unwrap() {
            HullMembership::Outside(w) => assert!(w.separates(&q, &set)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn empty_set_is_separated() {
        let set = PointSet::with_dim(2, vec![]).unwrap();
        let q = Point::from_ints(&[1, 1]);
        match hull_membership(&q, &set).unwrap() {
            HullMembership::Outside(w) => assert!(w.separates(&q, &set)),
            other => panic!("{other:?}"),
        }
    }

    fn orient3(a: &[i64], b: &[i64], c: &[i64], p: &[i64]) -> i64 {
        let u = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
        let v = [c[0] - a[0], c[1] - a[1], c[2] - a[2]];
        let w = [p[0] - a[0], p[1] - a[1], p[2] - a[2]];
        let det = u[0] * (v[1] * w[2] - v[2] * w[1]) - u[1] * (v[0] * w[2] - v[2] * w[0]) + u[2] * (v[0] * w[1] - v[1] * w[0]);
        det.signum()
    }

    /// Inside iff q is on the inner side of every facet plane spanned by
    /// three points of the set.
    fn facet_oracle(q: &[i64], pts: &[Vec<i64>]) -> bool {
        let n = pts.len();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let signs: Vec<i64> = pts.iter().map(|p| orient3(&pts[i], &pts[j], &pts[k], p)).collect();
                    let pos = signs.iter().any(|&s| s > 0);
                    let neg = signs.iter().any(|&s| s < 0);
                    if pos && neg {
                        continue;
                    }
                    let side = if pos { 1 } else { -1 };
                    let sq = orient3(&pts[i], &pts[j], &pts[k], q);
                    if sq == -side {
                        return false;
                    }
                }
            }
        }
        true
    }

    #[test]
    fn membership_matches_facet_enumeration_3d() {
        let mut rng = crate::random::rng(21);
        for _ in 0..200 {
            let pts: Vec<Vec<i64>> = (0..20).map(|_| (0..3).map(|_| rng.random_range(-50..50)).collect()).collect();
            let q: Vec<i64> = (0..3).map(|_| rng.random_range(-45..45)).collect();
            let set = PointSet::from_ints(&pts).unwrap();
            let qp = Point::from_ints(&q);
            let expected = facet_oracle(&q, &pts);
            match hull_membership(&qp, &set).unwrap() {
                HullMembership::Inside(c) => {
                    assert!(expected, "LP says inside, facets say outside: {q:?}");
                    assert!(c.support_len() <= 4);
                    assert!(c.violations(&set).is_empty());
                }
                HullMembership::Outside(w) => {
                    assert!(!expected, "LP says outside, facets say inside: {q:?}");
                    assert!(w.separates(&qp, &set));
                }
            }
        }
    }

    #[test]
    fn overlapping_segments_on_a_line() {
        let set = PointSet::from_ints(&[vec![0], vec![1], vec![2], vec![3]]).unwrap();
        match common_point(&[vec![0, 2], vec![1, 3]], &set).unwrap() {
            CommonPoint::Feasible { point, combinations } => {
                let x = &point.coords()[0];
                assert!(*x >= Rational::one() && *x <= rat(2, 1));
                for c in &combinations {
                    assert!(c.violations(&set).is_empty());
                }
            }
            CommonPoint::Infeasible => panic!("segments overlap"),
        }
    }

    #[test]
    fn disjoint_segments_are_infeasible() {
        let set = PointSet::from_ints(&[vec![0, 0], vec![1, 0], vec![0, 5], vec![1, 5]]).unwrap();
        assert_eq!(common_point(&[vec![0, 1], vec![2, 3]], &set).unwrap(), CommonPoint::Infeasible);
    }

    #[test]
    fn single_batch_point_is_in_its_hull() {
        let mut rng = crate::random::rng(3);
        for _ in 0..30 {
            let pts: Vec<Vec<i64>> = (0..6).map(|_| (0..3).map(|_| rng.random_range(-9..9)).collect()).collect();
            let set = PointSet::from_ints(&pts).unwrap();
            match common_point(&[vec![0, 2, 4, 5]], &set).unwrap() {
                CommonPoint::Feasible { point, .. } => {
                    assert!(matches!(hull_membership(&point, &set.subset(&[0, 2, 4, 5])).unwrap(), HullMembership::Inside(_)));
                }
                CommonPoint::Infeasible => panic!("a single hull is never empty"),
            }
        }
    }

    #[test]
    fn rejects_bad_batches() {
        let set = PointSet::from_ints(&[vec![0], vec![1]]).unwrap();
        assert!(common_point(&[], &set).is_err());
        assert!(common_point(&[vec![5]], &set).is_err());
    }

    #[test]
    fn separation_witness_signs() {
        let set = PointSet::from_ints(&[vec![0, 0], vec![1, 0]]).unwrap();
        let w = SeparationWitness { normal: vec![Rational::zero(), Rational::one()], offset: Rational::zero() };
        assert!(w.separates(&Point::from_ints(&[0, 1]), &set));
        assert!(!w.separates(&Point::from_ints(&[0, -1]), &set));
    }
}
