use std::collections::HashSet;

use num_traits::{Signed, Zero};
use rand::Rng;

use super::{check_general_position_2d, tukey_depth_2d, tverberg_log_2d};
use crate::error::{Result, TverbergError};
use crate::geom::linalg::Field;
use crate::geom::{rat, Point, PointSet, Rational};
use crate::kernel::{common_point, CommonPoint};
use crate::random::{default_rounds, iterated_radon_centerpoint, rng};
use crate::sites::{Batch, Site};

/// Largest input for the exhaustive arrangement-vertex fallback.
const EXHAUSTIVE_MAX_N: usize = 24;
const RADON_SEEDS: u64 = 8;
const WALK_STEPS: usize = 40;
/// Perturbation sizes tried for degenerate inputs, as powers of two below
/// the coordinate scale.
const PERTURB_EXPONENTS: [usize; 4] = [24, 40, 64, 96];

fn to_double_grid(p: &Point) -> Point {
    Point::new(p.coords().iter().map(|c| Rational::from_float(c.to_f64()).unwrap_or_else(Rational::zero)).collect())
}

fn centroid(points: impl IntoIterator<Item = Point>) -> Option<Point> {
    let mut acc: Option<Vec<Rational>> = None;
    let mut count = 0i64;
    for p in points {
        count += 1;
        match &mut acc {
            None => acc = Some(p.into_coords()),
            Some(a) => a.iter_mut().zip(p.coords()).for_each(|(x, y)| *x += y),
        }
    }
    acc.map(|a| Point::new(a.into_iter().map(|x| x / Rational::from_integer(count.into())).collect()))
}

struct Search<'a> {
    set: &'a PointSet,
    target: usize,
    scale: Rational,
}

impl Search<'_> {
    fn accepts(&self, q: &Point) -> Result<bool> {
        Ok(check_general_position_2d(self.set, q).is_ok() && tukey_depth_2d(self.set, q)?.depth >= self.target)
    }

    /// `q` itself or a tiny perturbation of it that passes.
    fn accept_near(&self, q: &Point) -> Result<Option<Point>> {
        if self.accepts(q)? {
            return Ok(Some(q.clone()));
        }
        if tukey_depth_2d(self.set, q)?.depth < self.target {
            return Ok(None);
        }
        // Deep enough but degenerate: nudge off the offending lines.
        for (a, b) in [(1, 3), (-2, 5), (3, -7), (-5, -11)] {
            let eps = &self.scale * rat(1, 1 << 40);
            let p = Point::new(vec![&q.coords()[0] + &eps * rat(a, 1), &q.coords()[1] + &eps * rat(b, 13)]);
            if self.accepts(&p)? {
                return Ok(Some(p));
            }
        }
        Ok(None)
    }

    /// Repeatedly moves halfway toward the centroid of the points outside
    /// the current depth witness.
    fn walk(&self, start: Point) -> Result<Option<Point>> {
        let mut q = start;
        for _ in 0..WALK_STEPS {
            if let Some(p) = self.accept_near(&q)? {
                return Ok(Some(p));
            }
            let w = tukey_depth_2d(self.set, &q)?.witness;
            let Some(far) = centroid(self.set.points().iter().filter(|p| !w.contains(p)).cloned()) else {
                return Ok(None);
            };
            let mid = Point::new(q.coords().iter().zip(far.coords()).map(|(a, b)| (a + b) / Rational::from_integer(2.into())).collect());
            q = to_double_grid(&mid);
        }
        Ok(None)
    }

    /// Vertices of the line arrangement spanned by point pairs. Every
    /// vertex of the deep region is one of them, so once three deep
    /// vertices are not collinear their centroid is interior.
    fn exhaustive(&self, degenerate: &mut Option<Point>) -> Result<Option<Point>> {
        let n = self.set.len();
        let pts = self.set.points();
        let mut lines: Vec<[Rational; 3]> = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let (p, q) = (pts[i].coords(), pts[j].coords());
                let a = &q[1] - &p[1];
                let b = &p[0] - &q[0];
                if a.is_zero() && b.is_zero() {
                    continue;
                }
                let c = &a * &p[0] + &b * &p[1];
                lines.push([a, b, c]);
            }
        }
        let mut deep: Vec<Point> = Vec::new();
        for i in 0..lines.len() {
            for j in i + 1..lines.len() {
                let [a1, b1, c1] = &lines[i];
                let [a2, b2, c2] = &lines[j];
                let det = a1 * b2 - a2 * b1;
                if det.is_zero() {
                    continue;
                }
                let v = Point::new(vec![(c1 * b2 - c2 * b1) / &det, (a1 * c2 - a2 * c1) / &det]);
                if deep.contains(&v) || tukey_depth_2d(self.set, &v)?.depth < self.target {
                    continue;
                }
                if degenerate.is_none() {
                    *degenerate = Some(v.clone());
                }
                deep.push(v);
                if deep.len() >= 3 {
                    if let Some(c) = centroid(deep.iter().cloned()) {
                        if let Some(p) = self.accept_near(&c)? {
                            return Ok(Some(p));
                        }
                    }
                }
            }
        }
        Ok(None)
    }
}

/// A point of Tukey depth at least `ceil(n/3)`, verified exactly. The point
/// is in general position with respect to the set (off every point and
/// every line through two points) unless the search found deep points only
/// on such lines, as happens for four points.
pub fn centerpoint_2d(set: &PointSet) -> Result<Point> {
    if set.dim() != 2 {
        return Err(TverbergError::DimensionMismatch { expected: 2, found: set.dim() });
    }
    let n = set.len();
    if n == 0 {
        return Err(TverbergError::Precondition("empty point set".into()));
    }
    let scale = set
        .points()
        .iter()
        .flat_map(|p| p.coords().iter().map(Signed::abs))
        .max()
        .filter(|m| !m.is_zero())
        .unwrap_or_else(|| Rational::from_integer(1.into()));
    let search = Search { set, target: n.div_ceil(3), scale };
    let rounds = default_rounds(n, 2);
    let mut starts = Vec::new();
    let next_start = |k: usize| -> Result<Point> {
        if k == 0 {
            Ok(centroid(set.points().iter().cloned()).unwrap())
        } else {
            iterated_radon_centerpoint(set, k as u64 - 1, rounds)
        }
    };
    for k in 0..=RADON_SEEDS as usize {
        let s = next_start(k)?;
        if let Some(p) = search.accept_near(&s)? {
            return Ok(p);
        }
        starts.push(s);
    }
    for s in starts {
        if let Some(p) = search.walk(s)? {
            return Ok(p);
        }
    }
    if n <= EXHAUSTIVE_MAX_N {
        let mut degenerate = None;
        if let Some(p) = search.exhaustive(&mut degenerate)? {
            return Ok(p);
        }
        if let Some(p) = degenerate {
            return Ok(p);
        }
    }
    Err(TverbergError::NonConvergence(format!("no centerpoint in general position found for n = {n}")))
}

/// Partition of the first `3 floor(n/3)` points into vertex-disjoint
/// triangles sharing a common point; the remaining one or two points are
/// reported unused.
pub fn birch_partition(set: &PointSet) -> Result<Site> {
    if set.dim() != 2 {
        return Err(TverbergError::DimensionMismatch { expected: 2, found: set.dim() });
    }
    let n = set.len();
    if n < 3 {
        return Err(TverbergError::Precondition(format!("Birch partition needs n >= 3, got {n}")));
    }
    let m = 3 * (n / 3);
    let idx: Vec<usize> = (0..m).collect();
    let sub = if m == n { set.clone() } else { set.subset(&idx) };
    let distinct = sub.points().iter().collect::<HashSet<_>>().len() == m;
    let direct = if distinct { centerpoint_2d(&sub).and_then(|c| tverberg_log_2d(&sub, &c)) } else { Err(TverbergError::GeneralPosition("repeated points".into())) };
    let site = match direct {
        Ok((_, site)) => site,
        Err(TverbergError::NonConvergence(_) | TverbergError::GeneralPosition(_)) => perturbed_birch(&sub)?,
        Err(e) => return Err(e),
    };
    if site.rank() != m / 3 {
        return Err(TverbergError::Internal(format!("Birch log has rank {}, expected {}", site.rank(), m / 3)));
    }
    let mut site = site.remap(&idx);
    site.unused.extend(m..n);
    Ok(site)
}

/// Birch partition of a degenerate set (repeated points, or no deep point
/// off the lines through pairs). The triangles come from a tiny random
/// perturbation; the common point and weights are then solved for on the
/// original points, so the result is exact. A perturbation that is too large
/// can give triangles without a common point, so smaller ones are tried.
fn perturbed_birch(set: &PointSet) -> Result<Site> {
    let scale = set.points().iter().flat_map(|p| p.coords().iter().map(Signed::abs)).fold(Rational::from_integer(1.into()), |a, b| a.max(b));
    let mut last = None;
    for (attempt, &e) in PERTURB_EXPONENTS.iter().enumerate() {
        let mut r = rng(attempt as u64);
        let eps = &scale / Rational::from_integer(num_bigint::BigInt::from(1) << e);
        let moved = set
            .points()
            .iter()
            .map(|p| Point::new(p.coords().iter().map(|c| c + &eps * rat(r.random_range(-(1 << 20)..=1 << 20), 1 << 20)).collect()))
            .collect();
        let moved = PointSet::new(moved)?;
        let triangles = match centerpoint_2d(&moved).and_then(|c| tverberg_log_2d(&moved, &c)) {
            Ok((_, site)) => site.log.batches.into_iter().map(|b| b.indices).collect::<Vec<_>>(),
            Err(e) => {
                last = Some(e);
                continue;
            }
        };
        if let CommonPoint::Feasible { point, combinations } = common_point(&triangles, set)? {
            let batches = triangles.into_iter().zip(combinations).map(|(t, w)| Batch::new(t, w)).collect();
            return Ok(Site::new(point, batches, Vec::new()));
        }
    }
    Err(last.unwrap_or_else(|| TverbergError::NonConvergence("perturbed triangles never shared a point".into())))
}
