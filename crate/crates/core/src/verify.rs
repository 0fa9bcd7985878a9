//! Exact certificate checks and brute-force depth oracles.

use std::collections::HashSet;

use num_traits::{Signed, Zero};

use crate::error::{Result, TverbergError};
use crate::geom::linalg::{null_vector, rref};
use crate::geom::{barycentric, Point, PointSet, Rational};
use crate::sites::Site;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub valid: bool,
    pub rank: usize,
    pub violations: Vec<String>,
}

/// Re-checks every claim a site makes about `set`, in exact arithmetic.
pub fn verify_site(set: &PointSet, site: &Site) -> VerifyReport {
    let d = set.dim();
    let n = set.len();
    let mut violations = Vec::new();
    if site.point.dim() != d {
        violations.push(format!("site point has dimension {}, points have {d}", site.point.dim()));
    }
    let mut seen: HashSet<usize> = HashSet::new();
    for (j, batch) in site.log.batches.iter().enumerate() {
        if batch.indices.is_empty() {
            violations.push(format!("batch {j} is empty"));
        }
        if batch.indices.len() > d + 1 {
            violations.push(format!("batch {j} has {} points, more than {}", batch.indices.len(), d + 1));
        }
        for &i in &batch.indices {
            if i >= n {
                violations.push(format!("batch {j} references index {i} outside 0..{n}"));
            } else if !seen.insert(i) {
                violations.push(format!("index {i} appears twice (batch {j})"));
            }
        }
        let w = &batch.witness;
        if let Some(i) = w.weights.keys().find(|i| !batch.indices.contains(i)) {
            violations.push(format!("batch {j} witness uses index {i} outside the batch"));
        }
        if w.target != site.point {
            violations.push(format!("batch {j} witness targets {:?}, not the site point", w.target));
        }
        for v in w.violations(set) {
            violations.push(format!("batch {j}: {v}"));
        }
    }
    let mut unused_seen: HashSet<usize> = HashSet::new();
    for &i in &site.unused {
        if i >= n {
            violations.push(format!("unused index {i} outside 0..{n}"));
        } else if seen.contains(&i) {
            violations.push(format!("unused index {i} also appears in a batch"));
        } else if !unused_seen.insert(i) {
            violations.push(format!("unused index {i} listed twice"));
        }
    }
    VerifyReport { valid: violations.is_empty(), rank: site.rank(), violations }
}

pub const BRUTE_TUKEY_MAX_N: usize = 64;
pub const BRUTE_TVERBERG_MAX_N: usize = 12;

/// Tukey depth of `q` by enumerating every hyperplane through `q` spanned by
/// input points, with the points on the hyperplane resolved recursively.
/// Accepts `2 <= d <= 3` and `n <= 64`.
pub fn brute_tukey_depth(set: &PointSet, q: &Point) -> Result<usize> {
    set.check_dim(q)?;
    if !(2..=3).contains(&set.dim()) || set.len() > BRUTE_TUKEY_MAX_N {
        return Err(TverbergError::ScaleCap(format!(
            "brute Tukey depth supports 2 <= d <= 3 and n <= {BRUTE_TUKEY_MAX_N}"
        )));
    }
    Ok(tukey_depth_unchecked(set, q))
}

/// Same as [`brute_tukey_depth`] without the scale cap.
pub(crate) fn tukey_depth_unchecked(set: &PointSet, q: &Point) -> usize {
    let vs: Vec<Vec<Rational>> = set.points().iter().map(|p| p.sub(q)).collect();
    depth_of_origin(&vs)
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Minimum over closed halfspaces with the origin on the boundary of the
/// number of vectors inside.
fn depth_of_origin(vs: &[Vec<Rational>]) -> usize {
    let zeros = vs.iter().filter(|v| v.iter().all(Zero::is_zero)).count();
    let nz: Vec<&Vec<Rational>> = vs.iter().filter(|v| !v.iter().all(Zero::is_zero)).collect();
    if nz.is_empty() {
        return vs.len();
    }
    let k = nz[0].len();
    // Reduce to the span of the vectors when it is a proper subspace.
    let mut basis_rows: Vec<Vec<Rational>> = nz.iter().map(|v| (*v).clone()).collect();
    let pivots = rref(&mut basis_rows, k);
    let r = pivots.len();
    if r < k {
        let coords: Vec<Vec<Rational>> = vs.iter().map(|v| pivots.iter().map(|&c| v[c].clone()).collect()).collect();
        // Pivot coordinates determine a vector of the span uniquely.
        return depth_of_origin(&coords);
    }
    if k == 1 {
        let pos = nz.iter().filter(|v| v[0].is_positive()).count();
        return zeros + pos.min(nz.len() - pos);
    }
    let mut best = vs.len();
    let mut idx: Vec<usize> = (0..k - 1).collect();
    loop {
        let rows: Vec<Vec<Rational>> = idx.iter().map(|&i| nz[i].clone()).collect();
        let mut check = rows.clone();
        if rref(&mut check, k).len() == k - 1 {
            let normal = null_vector(&rows, k).expect("k-1 vectors in k dimensions");
            let mut left = 0;
            let mut right = 0;
            let mut on: Vec<Vec<Rational>> = Vec::new();
            for v in vs {
                let s = dot(&normal, v);
                if s.is_positive() {
                    left += 1;
                } else if s.is_negative() {
                    right += 1;
                } else {
                    on.push(v.clone());
                }
            }
            if left.min(right) < best {
                // Coordinates inside the hyperplane: drop one coordinate on
                // which the normal is nonzero.
                let drop = normal.iter().position(|c| !c.is_zero()).unwrap();
                let proj: Vec<Vec<Rational>> = on
                    .iter()
                    .map(|v| v.iter().enumerate().filter(|(c, _)| *c != drop).map(|(_, x)| x.clone()).collect())
                    .collect();
                let inner = depth_of_origin(&proj);
                best = best.min(left.min(right) + inner);
            }
        }
        if !crate::geom::next_combination(&mut idx, nz.len()) {
            break;
        }
    }
    best
}

/// Tukey depth of `q`: counting on the line, the exact sweep in the plane,
/// and enumeration in space (within the brute force scale cap).
pub fn tukey_depth(set: &PointSet, q: &Point) -> Result<usize> {
    set.check_dim(q)?;
    match set.dim() {
        1 => {
            let x = &q.coords()[0];
            let le = set.points().iter().filter(|p| &p.coords()[0] <= x).count();
            let ge = set.points().iter().filter(|p| &p.coords()[0] >= x).count();
            Ok(le.min(ge))
        }
        2 => Ok(crate::planar::tukey_depth_2d(set, q)?.depth),
        _ => brute_tukey_depth(set, q),
    }
}

/// Maximum number of disjoint subsets of size at most `d+1` whose hulls
/// contain `q`, by exhaustive search. Accepts `n <= 12`, `d <= 2`.
pub fn brute_tverberg_depth(set: &PointSet, q: &Point) -> Result<usize> {
    set.check_dim(q)?;
    let n = set.len();
    let d = set.dim();
    if n > BRUTE_TVERBERG_MAX_N || d > 2 {
        return Err(TverbergError::ScaleCap(format!("brute Tverberg depth supports n <= {BRUTE_TVERBERG_MAX_N}, d <= 2")));
    }
    let coords: Vec<Vec<Rational>> = set.points().iter().map(|p| p.coords().to_vec()).collect();
    let mut good: Vec<u32> = Vec::new();
    for mask in 1u32..(1 << n) {
        if mask.count_ones() as usize > d + 1 {
            continue;
        }
        let verts: Vec<Vec<Rational>> = (0..n).filter(|i| mask & (1 << i) != 0).map(|i| coords[i].clone()).collect();
        if barycentric(q.coords(), &verts).is_some() {
            good.push(mask);
        }
    }
    let full = (1u32 << n) - 1;
    let mut memo = vec![u8::MAX; 1 << n];
    Ok(best_packing(full, &good, &mut memo) as usize)
}

fn best_packing(mask: u32, good: &[u32], memo: &mut [u8]) -> u8 {
    if mask == 0 {
        return 0;
    }
    if memo[mask as usize] != u8::MAX {
        return memo[mask as usize];
    }
    let low = mask & mask.wrapping_neg();
    let mut best = best_packing(mask & !low, good, memo);
    for &g in good {
        if g & low != 0 && g & !mask == 0 {
            best = best.max(1 + best_packing(mask & !g, good, memo));
        }
    }
    memo[mask as usize] = best;
    best
}
