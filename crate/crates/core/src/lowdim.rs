//! Tverberg points in low dimension by sampling a centerpoint and peeling
//! off simplices around it.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Result, TverbergError};
use crate::geom::linalg::null_vector;
use crate::geom::{Point, PointSet};
use crate::kernel::{hull_membership, ConvexCombination, HullMembership};
use crate::planar::centerpoint_2d;
use crate::random::{child_seed, default_rounds, iterated_radon_centerpoint, rng};
use crate::sites::{Batch, Site};

pub const MAX_DIM: usize = 8;
/// Iterated Radon candidates tried for `d >= 3`.
const CANDIDATES: u64 = 8;
/// Hyperplanes sampled when scoring a candidate.
const SCORE_TRIALS: usize = 512;

#[derive(Clone, Debug, PartialEq)]
pub struct ExtractParams {
    /// `C` in the sample size `C d^2 delta^-2 ln(d+1)`.
    pub sample_constant: f64,
    /// `C'` in the net size `C' (d/eps) ln(1/eps)`.
    pub net_constant: f64,
    /// Failed samples per extraction before falling back to all remaining
    /// points.
    pub resample_cap: usize,
}

impl Default for ExtractParams {
    fn default() -> Self {
        ExtractParams { sample_constant: 8.0, net_constant: 8.0, resample_cap: 32 }
    }
}

pub fn sample_size(d: usize, delta: f64, params: &ExtractParams) -> usize {
    let d = d as f64;
    (params.sample_constant * d * d / (delta * delta) * (d + 1.0).ln()).ceil() as usize
}

/// Net size for relative depth `eps`, at least `d+1`.
pub fn net_size(d: usize, eps: f64, params: &ExtractParams) -> usize {
    if eps >= 1.0 {
        return d + 1;
    }
    let r = (params.net_constant * d as f64 / eps * (1.0 / eps).ln()).ceil();
    (r as usize).max(d + 1)
}

/// Fewest points of `pts` in a closed halfspace bounded by one of `trials`
/// random hyperplanes through `q` and `d-1` sample points. An upper bound
/// on the Tukey depth, computed in floating point.
fn depth_score(pts: &[Vec<f64>], set: &PointSet, q: &Point, seed: u64) -> usize {
    let d = set.dim();
    let qf = q.to_f64();
    let mut rng = rng(seed);
    let mut best = pts.len();
    for _ in 0..SCORE_TRIALS {
        let normal = if d == 1 {
            vec![1.0]
        } else {
            let rows: Vec<Vec<f64>> = (0..d - 1)
                .map(|_| {
                    let p = &pts[rng.random_range(0..pts.len())];
                    p.iter().zip(&qf).map(|(a, b)| a - b).collect()
                })
                .collect();
            match null_vector(&rows, d) {
                Some(v) => v,
                None => continue,
            }
        };
        let side = |p: &Vec<f64>| p.iter().zip(&qf).zip(&normal).map(|((a, b), c)| (a - b) * c).sum::<f64>();
        let above = pts.iter().filter(|p| side(p) >= 0.0).count();
        let below = pts.iter().filter(|p| side(p) <= 0.0).count();
        best = best.min(above).min(below);
    }
    best
}

/// A deep point of the sample: the planar centerpoint for `d = 2`, and the
/// best scoring iterated Radon point otherwise. Returns it with its score.
fn sample_center(sample: &PointSet, seed: u64) -> Result<(Point, usize)> {
    if sample.dim() == 2 {
        let c = centerpoint_2d(sample)?;
        let depth = crate::planar::tukey_depth_2d(sample, &c)?.depth;
        return Ok((c, depth));
    }
    let pts: Vec<Vec<f64>> = sample.points().iter().map(Point::to_f64).collect();
    let rounds = default_rounds(sample.len(), sample.dim());
    let mut best: Option<(Point, usize)> = None;
    for k in 0..CANDIDATES {
        let c = iterated_radon_centerpoint(sample, child_seed(seed, k), rounds)?;
        let score = depth_score(&pts, sample, &c, child_seed(seed, CANDIDATES + k));
        if best.as_ref().is_none_or(|(_, s)| score > *s) {
            best = Some((c, score));
        }
    }
    Ok(best.expect("at least one candidate"))
}

/// A site of rank at least `floor((1-delta) n / (d(d+1)))` with high
/// probability: a centerpoint of a random sample, then repeated extraction
/// of at most `d+1` remaining points whose hull contains it, each found in
/// a random sample sized for the current relative depth.
pub fn extract_tverberg(set: &PointSet, delta: f64, seed: u64, params: &ExtractParams) -> Result<Site> {
    let d = set.dim();
    let n = set.len();
    if d == 0 || d > MAX_DIM {
        return Err(TverbergError::Precondition(format!("extraction supports 1 <= d <= {MAX_DIM}, got {d}")));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(TverbergError::Precondition(format!("delta must lie in (0, 1), got {delta}")));
    }
    if n < d * (d + 1) {
        return Err(TverbergError::Precondition(format!("extraction needs n >= {}, got {n}", d * (d + 1))));
    }
    let mut rng = rng(seed);
    let m = sample_size(d, delta, params).min(n);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut sample_idx = order[..m].to_vec();
    sample_idx.sort_unstable();
    let (center, score) = sample_center(&set.subset(&sample_idx), child_seed(seed, u64::MAX))?;
    // Depth of the center in the whole set, as estimated from the sample.
    let depth0 = score * n / m;

    let mut remaining: Vec<usize> = (0..n).collect();
    let mut batches = Vec::new();
    for i in 0.. {
        if remaining.is_empty() {
            break;
        }
        let b = depth0.saturating_sub(d * i);
        let eps = if b == 0 { 1.0 } else { b as f64 / remaining.len() as f64 };
        let r = net_size(d, eps, params);
        let mut found: Option<ConvexCombination> = None;
        if r < remaining.len() {
            for _ in 0..params.resample_cap {
                let (chosen, _) = remaining.partial_shuffle(&mut rng, r);
                let mut idx = chosen.to_vec();
                idx.sort_unstable();
                if let HullMembership::Inside(c) = hull_membership(&center, &set.subset(&idx))? {
                    found = Some(remap(c, &idx));
                    break;
                }
            }
        }
        if found.is_none() {
            remaining.sort_unstable();
            match hull_membership(&center, &set.subset(&remaining))? {
                HullMembership::Inside(c) => found = Some(remap(c, &remaining)),
                HullMembership::Outside(_) => break,
            }
        }
        let batch = Batch::from_combination(found.expect("set above"));
        remaining.retain(|j| batch.indices.binary_search(j).is_err());
        batches.push(batch);
    }
    remaining.sort_unstable();
    Ok(Site::new(center, batches, remaining))
}

fn remap(c: ConvexCombination, idx: &[usize]) -> ConvexCombination {
    ConvexCombination { weights: c.weights.into_iter().map(|(i, w)| (idx[i], w)).collect(), target: c.target }
}
