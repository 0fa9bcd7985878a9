//! Exact Tverberg partitions for small inputs by local search over
//! balanced partitions.
//!
//! The search is guided in floating point: the smallest ball meeting every
//! class hull is found by a prox-linear minimax iteration, and a free-point
//! exchange between two tight classes shrinks it. Once the ball has
//! collapsed, a rational LP over the final classes supplies the point and
//! its certificate.

use crate::error::{Result, TverbergError};
use crate::geom::linalg::{solve_system, SystemSolution};
use crate::geom::{nearest_in_hull, PointSet};
use crate::kernel::{common_point, CommonPoint};
use crate::sites::{Batch, Site};

pub const MAX_DIM: usize = 3;
pub const MAX_POINTS: usize = 24;
const MAX_EXCHANGES: usize = 10_000;
const MAX_TAU_HALVINGS: usize = 30;
const PROX_ITERATIONS: usize = 5_000;

#[derive(Clone, Debug, PartialEq)]
pub struct ExactParams {
    /// Ball radius treated as zero, relative to the input diameter.
    pub tau: f64,
}

impl Default for ExactParams {
    fn default() -> Self {
        ExactParams { tau: 1e-9 }
    }
}

/// The smallest ball meeting every class hull, in normalized coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct BallState {
    pub center: Vec<f64>,
    pub radius: f64,
    /// Distance from the center to each class hull.
    pub distances: Vec<f64>,
    /// Classes whose hull is within `2 tau` of the radius.
    pub tight: Vec<usize>,
    /// Nearest hull point of each tight class, aligned with `tight`.
    pub contacts: Vec<Vec<f64>>,
}

/// Input scaled to unit diameter around its centroid, so that float
/// thresholds are absolute.
#[derive(Clone, Debug)]
pub struct Normalized {
    pub points: Vec<Vec<f64>>,
    pub diameter: f64,
}

impl Normalized {
    pub fn new(set: &PointSet) -> Self {
        let raw: Vec<Vec<f64>> = set.points().iter().map(|p| p.to_f64()).collect();
        let d = set.dim();
        let n = raw.len().max(1) as f64;
        let mean: Vec<f64> = (0..d).map(|c| raw.iter().map(|p| p[c]).sum::<f64>() / n).collect();
        let mut diameter: f64 = 0.0;
        for a in &raw {
            for b in &raw {
                diameter = diameter.max(dist(a, b));
            }
        }
        let scale = if diameter > 0.0 { diameter } else { 1.0 };
        let points = raw.iter().map(|p| p.iter().zip(&mean).map(|(x, m)| (x - m) / scale).collect()).collect();
        Normalized { points, diameter }
    }

    fn hull(&self, class: &[usize]) -> Vec<Vec<f64>> {
        class.iter().map(|&i| self.points[i].clone()).collect()
    }
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Distance from `x` to each hull, with the unit direction from the nearest
/// hull point toward `x` (zero inside the hull) and the nearest point.
fn evaluate(x: &[f64], hulls: &[Vec<Vec<f64>>]) -> Vec<(f64, Vec<f64>, Vec<f64>)> {
    hulls
        .iter()
        .map(|h| {
            let near = nearest_in_hull(x, h).expect("nonempty hull");
            let dd = near.squared_distance.max(0.0).sqrt();
            let g = if dd > 0.0 { x.iter().zip(&near.point).map(|(a, b)| (a - b) / dd).collect() } else { vec![0.0; x.len()] };
            (dd, g, near.point)
        })
        .collect()
}

fn max_of(values: &[(f64, Vec<f64>, Vec<f64>)]) -> f64 {
    values.iter().map(|v| v.0).fold(0.0, f64::max)
}

/// Minimizes `max_i (d_i + g_i . s) + (mu/2)|s|^2` over steps `s`: the
/// optimum is a KKT point of some active subset of at most `dim+1`
/// constraints, so every such subset is solved and the best model value
/// kept.
fn prox_step(lin: &[(f64, Vec<f64>, Vec<f64>)], mu: f64, dim: usize) -> (Vec<f64>, f64) {
    let k = lin.len();
    let model = |s: &[f64]| lin.iter().map(|(d, g, _)| d + dot(g, s)).fold(f64::NEG_INFINITY, f64::max) + 0.5 * mu * dot(s, s);
    let mut best: Option<(Vec<f64>, f64)> = None;
    let max_size = k.min(dim + 1);
    for mask in 1u32..(1u32 << k) {
        let active: Vec<usize> = (0..k).filter(|i| mask & (1 << i) != 0).collect();
        if active.len() > max_size {
            continue;
        }
        let m = active.len();
        // Unknowns (lambda_A, t): d_i - (1/mu) sum_j (g_i.g_j) lambda_j - t = 0, sum lambda = 1.
        let mut a = Vec::with_capacity(m + 1);
        let mut b = Vec::with_capacity(m + 1);
        for &i in &active {
            let mut row: Vec<f64> = active.iter().map(|&j| -dot(&lin[i].1, &lin[j].1) / mu).collect();
            row.push(-1.0);
            a.push(row);
            b.push(-lin[i].0);
        }
        let mut row = vec![1.0; m];
        row.push(0.0);
        a.push(row);
        b.push(1.0);
        let Ok(SystemSolution::Unique(sol)) = solve_system(&a, &b, m + 1) else {
            continue;
        };
        if sol[..m].iter().any(|&l| l < -1e-12) {
            continue;
        }
        let mut s = vec![0.0; dim];
        for (&j, &l) in active.iter().zip(&sol) {
            for (sc, gc) in s.iter_mut().zip(&lin[j].1) {
                *sc -= l * gc / mu;
            }
        }
        let v = model(&s);
        if best.as_ref().is_none_or(|(_, bv)| v < *bv) {
            best = Some((s, v));
        }
    }
    best.unwrap_or_else(|| (vec![0.0; dim], model(&vec![0.0; dim])))
}

/// Minimum over `x` of the largest distance from `x` to a class hull,
/// started from `start`.
pub fn min_ball_over_hulls(classes: &[Vec<usize>], norm: &Normalized, start: Option<&[f64]>, tau: f64) -> Result<BallState> {
    let dim = norm.points.first().map_or(0, Vec::len);
    if classes.is_empty() || classes.iter().any(Vec::is_empty) {
        return Err(TverbergError::Precondition("min ball needs nonempty classes".into()));
    }
    let hulls: Vec<Vec<Vec<f64>>> = classes.iter().map(|c| norm.hull(c)).collect();
    let mut x: Vec<f64> = match start {
        Some(s) => s.to_vec(),
        None => {
            let all: Vec<&Vec<f64>> = classes.iter().flatten().map(|&i| &norm.points[i]).collect();
            (0..dim).map(|c| all.iter().map(|p| p[c]).sum::<f64>() / all.len() as f64).collect()
        }
    };
    let mut vals = evaluate(&x, &hulls);
    let mut fx = max_of(&vals);
    let mut mu = 1.0;
    let mut converged = false;
    for _ in 0..PROX_ITERATIONS {
        if fx <= tau * 1e-3 {
            converged = true;
            break;
        }
        let (s, predicted) = prox_step(&vals, mu, dim);
        let gain = fx - predicted;
        if gain <= 1e-15 {
            converged = true;
            break;
        }
        let y: Vec<f64> = x.iter().zip(&s).map(|(a, b)| a + b).collect();
        let vy = evaluate(&y, &hulls);
        let fy = max_of(&vy);
        if fx - fy >= 0.1 * gain {
            x = y;
            vals = vy;
            fx = fy;
            mu = (mu * 0.5).max(1e-6);
        } else {
            mu *= 4.0;
            if mu > 1e12 {
                converged = true;
                break;
            }
        }
    }
    if !converged {
        return Err(TverbergError::NonConvergence(format!("min ball did not settle in {PROX_ITERATIONS} steps")));
    }
    let threshold = 2.0 * tau;
    let mut tight = Vec::new();
    let mut contacts = Vec::new();
    for (i, v) in vals.iter().enumerate() {
        if fx - v.0 <= threshold.max(1e-7 * fx) {
            tight.push(i);
            contacts.push(v.2.clone());
        }
    }
    Ok(BallState { center: x, radius: fx, distances: vals.iter().map(|v| v.0).collect(), tight, contacts })
}

/// Vertices of `class` whose removal keeps `q` in the hull, lowest first.
fn free_points(class: &[usize], q: &[f64], norm: &Normalized) -> Vec<usize> {
    let hull = norm.hull(class);
    let near = nearest_in_hull(q, &hull).expect("nonempty hull");
    let mut free: Vec<usize> = (0..class.len()).filter(|i| !near.face.contains(i)).map(|i| class[i]).collect();
    free.sort_unstable();
    free
}

/// Swaps a free point of one tight class with a free point of another whose
/// contact lies beyond the hyperplane through the center orthogonal to the
/// first free point. Candidates are tried in order until the ball shrinks.
pub fn exchange_step(
    state: &BallState,
    classes: &[Vec<usize>],
    norm: &Normalized,
    tau: f64,
) -> Result<(Vec<Vec<usize>>, BallState)> {
    if state.radius <= tau {
        return Err(TverbergError::Precondition("the ball has already collapsed".into()));
    }
    let b = &state.center;
    for (t1, &c1) in state.tight.iter().enumerate() {
        for f1 in free_points(&classes[c1], &state.contacts[t1], norm) {
            let dir: Vec<f64> = norm.points[f1].iter().zip(b).map(|(p, c)| p - c).collect();
            // Contacts strictly beyond the hyperplane, farthest first.
            let mut far: Vec<(f64, usize)> = state
                .tight
                .iter()
                .enumerate()
                .filter(|&(t2, _)| t2 != t1)
                .map(|(t2, _)| {
                    let rel: Vec<f64> = state.contacts[t2].iter().zip(b).map(|(q, c)| q - c).collect();
                    (dot(&rel, &dir), t2)
                })
                .filter(|&(s, _)| s < 0.0)
                .collect();
            far.sort_by(|a, c| a.0.total_cmp(&c.0));
            for &(_, t2) in &far {
                let c2 = state.tight[t2];
                for f2 in free_points(&classes[c2], &state.contacts[t2], norm) {
                    let mut next = classes.to_vec();
                    next[c1].retain(|&i| i != f1);
                    next[c1].push(f2);
                    next[c2].retain(|&i| i != f2);
                    next[c2].push(f1);
                    next[c1].sort_unstable();
                    next[c2].sort_unstable();
                    let ball = min_ball_over_hulls(&next, norm, Some(b), tau)?;
                    if ball.radius < state.radius * (1.0 - 1e-12) || ball.radius <= tau {
                        return Ok((next, ball));
                    }
                }
            }
        }
    }
    Err(TverbergError::GeneralPosition(format!(
        "no exchange shrinks the ball of radius {:e} (tight classes {:?})",
        state.radius, state.tight
    )))
}

/// A completed run: the certified site and the radius after every
/// exchange.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactRun {
    pub site: Site,
    pub classes: Vec<Vec<usize>>,
    pub radii: Vec<f64>,
}

/// A partition of `n = r(d+1)` points into `r` classes whose hulls share a
/// point, with that point and exact coefficients.
pub fn exact_tverberg(set: &PointSet) -> Result<Site> {
    Ok(exact_tverberg_with(set, &ExactParams::default())?.site)
}

pub fn exact_tverberg_with(set: &PointSet, params: &ExactParams) -> Result<ExactRun> {
    let d = set.dim();
    let n = set.len();
    if d == 0 || d > MAX_DIM || n > MAX_POINTS {
        return Err(TverbergError::ScaleCap(format!(
            "exact search supports d <= {MAX_DIM} and n <= {MAX_POINTS} (got d = {d}, n = {n}); use an approximation algorithm"
        )));
    }
    if n == 0 || n % (d + 1) != 0 {
        return Err(TverbergError::Precondition(format!("n = {n} must be a positive multiple of d+1 = {}", d + 1)));
    }
    let norm = Normalized::new(set);
    let mut tau = params.tau;
    let mut classes: Vec<Vec<usize>> = (0..n).collect::<Vec<_>>().chunks(d + 1).map(<[usize]>::to_vec).collect();
    let mut ball = min_ball_over_hulls(&classes, &norm, None, tau)?;
    let mut radii = vec![ball.radius];
    let mut halvings = 0;
    for _ in 0..MAX_EXCHANGES {
        if ball.radius <= tau {
            if let CommonPoint::Feasible { point, combinations } = common_point(&classes, set)? {
                let batches = combinations
                    .into_iter()
                    .zip(&classes)
                    .map(|(c, class)| Batch::new(class.clone(), c))
                    .collect();
                let site = Site::new(point, batches, Vec::new());
                return Ok(ExactRun { site, classes, radii });
            }
            halvings += 1;
            if halvings > MAX_TAU_HALVINGS {
                return Err(TverbergError::NonConvergence("class hulls stay disjoint below every tolerance".into()));
            }
            tau /= 2.0;
            ball = min_ball_over_hulls(&classes, &norm, Some(&ball.center), tau)?;
            continue;
        }
        let (next, next_ball) = exchange_step(&ball, &classes, &norm, tau)?;
        classes = next;
        ball = next_ball;
        radii.push(ball.radius);
    }
    Err(TverbergError::NonConvergence(format!("no Tverberg partition after {MAX_EXCHANGES} exchanges")))
}
