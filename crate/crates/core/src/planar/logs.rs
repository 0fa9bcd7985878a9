use num_traits::{Signed, Zero};

use super::{check_general_position_2d, tukey_depth_2d, IntVec, PlanarDepthResult};
use crate::error::{Result, TverbergError};
use crate::geom::{barycentric, Point, PointSet, Rational};
use crate::kernel::ConvexCombination;
use crate::sites::{Batch, Site};

/// Triangle batch with exact barycentric witness.
fn triangle(set: &PointSet, q: &Point, tri: [usize; 3]) -> Result<Batch> {
    let verts: Vec<Vec<Rational>> = tri.iter().map(|&i| set.point(i).coords().to_vec()).collect();
    let w = barycentric(q.coords(), &verts)
        .ok_or_else(|| TverbergError::Internal(format!("triangle {tri:?} misses the query point")))?;
    let comb = ConvexCombination {
        weights: tri.iter().zip(w).filter(|(_, w)| !w.is_zero()).map(|(&i, w)| (i, w)).collect(),
        target: q.clone(),
    };
    Ok(Batch::new(tri.to_vec(), comb))
}

/// A log of rank `k` for a point of Tukey depth `k <= n/3`: the `k` points
/// of the realizing halfplane are paired with the first and last `k`
/// points of the opposite side in angular order.
pub fn shallow_log_2d(set: &PointSet, q: &Point, depth: &PlanarDepthResult) -> Result<Site> {
    check_general_position_2d(set, q)?;
    let n = set.len();
    let k = depth.depth;
    if 3 * k > n {
        return Err(TverbergError::Precondition(format!("depth {k} exceeds n/3 for n = {n}")));
    }
    let h = &depth.witness;
    if !h.on_boundary(q) {
        return Err(TverbergError::Precondition("witness line must pass through the query".into()));
    }
    // Frame with the witness line as x-axis and the halfplane above it.
    let e1 = [-h.normal[1].clone(), h.normal[0].clone()];
    let e2 = [-h.normal[0].clone(), -h.normal[1].clone()];
    let mut above: Vec<(IntVec, usize)> = Vec::new();
    let mut below: Vec<(IntVec, usize)> = Vec::new();
    for (i, p) in set.points().iter().enumerate() {
        let v = p.sub(q);
        let x = &v[0] * &e1[0] + &v[1] * &e1[1];
        let y = &v[0] * &e2[0] + &v[1] * &e2[1];
        if y.is_positive() {
            above.push((IntVec::from_rationals(&x, &y), i));
        } else if y.is_negative() {
            below.push((IntVec::from_rationals(&x, &y), i));
        } else {
            return Err(TverbergError::GeneralPosition(format!("point {i} lies on the witness line")));
        }
    }
    if above.len() != k {
        return Err(TverbergError::Precondition(format!("witness holds {} points, depth is {k}", above.len())));
    }
    above.sort_by(|a, b| a.0.angle_cmp(&b.0));
    below.sort_by(|a, b| a.0.angle_cmp(&b.0));
    let m = below.len();
    let t: Vec<usize> = below[..k].iter().chain(&below[m - k..]).map(|e| e.1).collect();
    let batches = (0..k).map(|i| triangle(set, q, [above[i].1, t[i], t[k + i]])).collect::<Result<Vec<_>>>()?;
    let unused = below[k..m - k].iter().map(|e| e.1).collect();
    Ok(Site::new(q.clone(), batches, unused))
}

/// Points sorted counterclockwise around `q`.
fn angular_order(set: &PointSet, q: &Point) -> Vec<usize> {
    let mut dirs: Vec<(IntVec, usize)> =
        set.points().iter().enumerate().map(|(i, p)| (IntVec::between(q, p), i)).collect();
    dirs.sort_by(|a, b| a.0.angle_cmp(&b.0));
    dirs.into_iter().map(|e| e.1).collect()
}

fn deep_from_order(set: &PointSet, q: &Point) -> Result<Site> {
    let order = angular_order(set, q);
    let s = set.len() / 3;
    let batches =
        (0..s).map(|i| triangle(set, q, [order[i], order[s + i], order[2 * s + i]])).collect::<Result<Vec<_>>>()?;
    Ok(Site::new(q.clone(), batches, order[3 * s..].to_vec()))
}

/// A log of rank `floor(n/3)` for a point of Tukey depth at least `n/3`:
/// triangle `i` joins the points `i`, `s+i`, `2s+i` in angular order. At
/// depth exactly `n/3` the angular argument breaks down and the shallow
/// construction, which reaches the same rank, is used instead.
pub fn deep_log_2d(set: &PointSet, q: &Point) -> Result<Site> {
    check_general_position_2d(set, q)?;
    let depth = tukey_depth_2d(set, q)?;
    let k = depth.depth;
    if 3 * k < set.len() {
        return Err(TverbergError::Precondition(format!("depth {k} is below n/3 for n = {}", set.len())));
    }
    if 3 * k == set.len() {
        return shallow_log_2d(set, q, &depth);
    }
    deep_from_order(set, q)
}

/// Tukey depth `k` of `q` and a log of rank `min(floor(n/3), k)`.
pub fn tverberg_log_2d(set: &PointSet, q: &Point) -> Result<(usize, Site)> {
    check_general_position_2d(set, q)?;
    let depth = tukey_depth_2d(set, q)?;
    let k = depth.depth;
    let site = if 3 * k <= set.len() { shallow_log_2d(set, q, &depth)? } else { deep_from_order(set, q)? };
    Ok((k, site))
}
