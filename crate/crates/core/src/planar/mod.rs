//! Planar depth and partitions: Tukey depth with a realizing halfplane,
//! logs for shallow and deep points, centerpoints and Birch partitions.

mod center;
mod logs;

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Result, TverbergError};
use crate::geom::{Point, PointSet, Rational};

pub use center::{birch_partition, centerpoint_2d};
pub use logs::{deep_log_2d, shallow_log_2d, tverberg_log_2d};

/// The closed halfplane `<normal, x> <= offset`.
#[derive(Clone, Debug, PartialEq)]
pub struct Halfplane {
    pub normal: [Rational; 2],
    pub offset: Rational,
}

impl Halfplane {
    pub fn value(&self, p: &Point) -> Rational {
        &self.normal[0] * &p.coords()[0] + &self.normal[1] * &p.coords()[1]
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.value(p) <= self.offset
    }

    pub fn on_boundary(&self, p: &Point) -> bool {
        self.value(p) == self.offset
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PlanarDepthResult {
    pub depth: usize,
    /// Has the query on its boundary and exactly `depth` points inside.
    pub witness: Halfplane,
}

fn check_planar(set: &PointSet, q: &Point) -> Result<()> {
    if set.dim() != 2 {
        return Err(TverbergError::DimensionMismatch { expected: 2, found: set.dim() });
    }
    set.check_dim(q)
}

/// A direction `p - q` scaled to integers. Scaling by a positive factor
/// keeps every orientation and angular comparison.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct IntVec {
    pub x: BigInt,
    pub y: BigInt,
}

impl IntVec {
    pub fn from_rationals(x: &Rational, y: &Rational) -> Self {
        let l = x.denom().lcm(y.denom());
        IntVec { x: x.numer() * (&l / x.denom()), y: y.numer() * (&l / y.denom()) }
    }

    pub fn between(q: &Point, p: &Point) -> Self {
        let v = p.sub(q);
        Self::from_rationals(&v[0], &v[1])
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn cross(&self, o: &IntVec) -> BigInt {
        &self.x * &o.y - &self.y * &o.x
    }

    /// 0 for angles in `[0, pi)`, 1 for `[pi, 2pi)`.
    fn half(&self) -> u8 {
        if self.y.is_positive() || (self.y.is_zero() && self.x.is_positive()) {
            0
        } else {
            1
        }
    }

    /// Counterclockwise order by angle from the positive x-axis.
    pub fn angle_cmp(&self, o: &IntVec) -> Ordering {
        self.half().cmp(&o.half()).then_with(|| o.cross(self).sign_ordering())
    }
}

trait SignOrdering {
    fn sign_ordering(&self) -> Ordering;
}

impl SignOrdering for BigInt {
    fn sign_ordering(&self) -> Ordering {
        if self.is_positive() {
            Ordering::Greater
        } else if self.is_negative() {
            Ordering::Less
        } else {
            Ordering::Equal
        }
    }
}

/// Rejects `q` in the set and any two points collinear with `q`, the
/// configurations the log constructions cannot handle.
pub fn check_general_position_2d(set: &PointSet, q: &Point) -> Result<()> {
    check_planar(set, q)?;
    let mut dirs: Vec<(IntVec, usize)> = Vec::with_capacity(set.len());
    for (i, p) in set.points().iter().enumerate() {
        let v = IntVec::between(q, p);
        if v.is_zero() {
            return Err(TverbergError::GeneralPosition(format!("point {i} coincides with the query")));
        }
        // Identify opposite directions.
        let v = if v.half() == 1 { IntVec { x: -v.x, y: -v.y } } else { v };
        dirs.push((v, i));
    }
    dirs.sort_by(|a, b| a.0.angle_cmp(&b.0));
    for w in dirs.windows(2) {
        if w[0].0.cross(&w[1].0).is_zero() {
            return Err(TverbergError::GeneralPosition(format!(
                "points {} and {} are collinear with the query",
                w[0].1, w[1].1
            )));
        }
    }
    Ok(())
}

/// A slope `num / den` with `den > 0`, compared without normalizing.
#[derive(Clone, Debug)]
struct Slope {
    num: BigInt,
    den: BigInt,
}

impl Slope {
    fn to_rational(&self) -> Rational {
        Rational::new(self.num.clone(), self.den.clone())
    }
}

impl PartialEq for Slope {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}

impl Eq for Slope {}

impl PartialOrd for Slope {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for Slope {
    fn cmp(&self, o: &Self) -> Ordering {
        (&self.num * &o.den).cmp(&(&o.num * &self.den))
    }
}

/// For lines through `q` with slope `s`, point `p` lies in the closed lower
/// halfplane iff `s >= h` (an upper constraint `s < h` avoids it), iff
/// `s <= h` (a lower constraint `s > h` avoids it), or for every `s`.
struct Rays {
    upper: Vec<Slope>,
    lower: Vec<Slope>,
    constant: usize,
}

fn rays(dirs: &[IntVec], reflect: bool) -> Rays {
    let mut r = Rays { upper: Vec::new(), lower: Vec::new(), constant: 0 };
    for v in dirs {
        let b = if reflect { -v.y.clone() } else { v.y.clone() };
        if v.x.is_positive() {
            r.upper.push(Slope { num: b, den: v.x.clone() });
        } else if v.x.is_negative() {
            r.lower.push(Slope { num: -b, den: -v.x.clone() });
        } else if !b.is_positive() {
            r.constant += 1;
        }
    }
    r
}

/// First stage of one-dimensional LP with violations: the 4-approximation
/// from the doubling sets, and the surviving constraints with the window
/// every optimal slope lies in.
struct Approximation {
    estimate: usize,
    upper: Vec<Slope>,
    lower: Vec<Slope>,
    window_lo: Option<Slope>,
    window_hi: Option<Slope>,
}

fn approximate(mut upper: Vec<Slope>, mut lower: Vec<Slope>) -> Approximation {
    let n = upper.len() + lower.len();
    if n == 0 {
        return Approximation { estimate: 0, upper, lower, window_lo: None, window_hi: None };
    }
    let h = usize::BITS as usize - 1 - n.leading_zeros() as usize;
    // Level i keeps the floor(n/2^i) most restrictive constraints of each
    // kind; level h+1 keeps none.
    let size = |i: usize| if i > h { 0 } else { n >> i };
    let mut u_levels: Vec<Vec<Slope>> = vec![std::mem::take(&mut upper)];
    let mut l_levels: Vec<Vec<Slope>> = vec![std::mem::take(&mut lower)];
    // Tightest constraint outside level i.
    let mut u_rest: Vec<Option<Slope>> = vec![None];
    let mut l_rest: Vec<Option<Slope>> = vec![None];
    for i in 1..=h + 1 {
        let (keep_u, out_u) = split_smallest(u_levels[i - 1].clone(), size(i));
        let (keep_l, out_l) = split_largest(l_levels[i - 1].clone(), size(i));
        let ru = [u_rest[i - 1].clone(), out_u.into_iter().min()].into_iter().flatten().min();
        let rl = [l_rest[i - 1].clone(), out_l.into_iter().max()].into_iter().flatten().max();
        u_levels.push(keep_u);
        l_levels.push(keep_l);
        u_rest.push(ru);
        l_rest.push(rl);
    }
    let feasible = |i: usize| match (&l_rest[i], &u_rest[i]) {
        (Some(lo), Some(hi)) => lo < hi,
        _ => true,
    };
    let j = (0..=h + 1).rev().find(|&i| feasible(i)).unwrap_or(0);
    let estimate = u_levels[j].len() + l_levels[j].len();
    let (upper, lower, window_lo, window_hi) = if j == 0 {
        (u_levels.swap_remove(0), l_levels.swap_remove(0), None, None)
    } else {
        (
            u_levels.swap_remove(j - 1),
            l_levels.swap_remove(j - 1),
            l_rest[j - 1].clone(),
            u_rest[j - 1].clone(),
        )
    };
    Approximation { estimate, upper, lower, window_lo, window_hi }
}

fn split_smallest(mut v: Vec<Slope>, keep: usize) -> (Vec<Slope>, Vec<Slope>) {
    if keep >= v.len() {
        return (v, Vec::new());
    }
    if keep == 0 {
        return (Vec::new(), v);
    }
    v.select_nth_unstable(keep - 1);
    let rest = v.split_off(keep);
    (v, rest)
}

fn split_largest(mut v: Vec<Slope>, keep: usize) -> (Vec<Slope>, Vec<Slope>) {
    if keep >= v.len() {
        return (v, Vec::new());
    }
    if keep == 0 {
        return (Vec::new(), v);
    }
    let cut = v.len() - keep;
    v.select_nth_unstable(cut);
    let top = v.split_off(cut);
    (top, v)
}

/// Second stage: sweep the open intervals between surviving heads inside
/// the window. Returns the violation count and a slope attaining it.
fn sweep(a: Approximation) -> (usize, Rational) {
    let mut upper = a.upper;
    let mut lower = a.lower;
    upper.sort();
    lower.sort();
    let inside = |s: &Slope| {
        a.window_lo.as_ref().is_none_or(|lo| s > lo) && a.window_hi.as_ref().is_none_or(|hi| s < hi)
    };
    let mut breaks: Vec<Slope> = upper.iter().chain(&lower).filter(|s| inside(s)).cloned().collect();
    breaks.sort();
    breaks.dedup();
    let mut ends: Vec<Option<&Slope>> = vec![a.window_lo.as_ref()];
    ends.extend(breaks.iter().map(Some));
    ends.push(a.window_hi.as_ref());
    // On the open interval (lo, hi) an upper head u is violated iff u <= lo
    // and a lower head l iff l >= hi.
    let mut best: Option<(usize, usize)> = None;
    for (k, w) in ends.windows(2).enumerate() {
        let violated = w[0].map_or(0, |lo| upper.partition_point(|u| u <= lo))
            + w[1].map_or(0, |hi| lower.len() - lower.partition_point(|l| l < hi));
        if best.is_none_or(|(b, _)| violated < b) {
            best = Some((violated, k));
        }
    }
    let (violated, k) = best.expect("at least one interval");
    let s = match (ends[k], ends[k + 1]) {
        (Some(lo), Some(hi)) => (lo.to_rational() + hi.to_rational()) / Rational::from_integer(2.into()),
        (Some(lo), None) => lo.to_rational() + Rational::one(),
        (None, Some(hi)) => hi.to_rational() - Rational::one(),
        (None, None) => Rational::zero(),
    };
    (violated, s)
}

/// Tukey depth of `q` in a planar set together with a closed halfplane
/// through `q` realizing it. Both vertical directions are handled through
/// the doubling-set 4-approximation before the exact sweep. Collinearities
/// with `q` are counted exactly rather than rejected.
pub fn tukey_depth_2d(set: &PointSet, q: &Point) -> Result<PlanarDepthResult> {
    check_planar(set, q)?;
    let dirs: Vec<IntVec> = set.points().iter().map(|p| IntVec::between(q, p)).collect();
    let down = rays(&dirs, false);
    let up = rays(&dirs, true);
    let (cd, cu) = (down.constant, up.constant);
    let ad = approximate(down.upper, down.lower);
    let au = approximate(up.upper, up.lower);
    let (ed, eu) = (cd + ad.estimate, cu + au.estimate);
    let qx = &q.coords()[0];
    let qy = &q.coords()[1];
    let down_result = |a: Approximation| {
        let (v, s) = sweep(a);
        let witness = Halfplane { normal: [-s.clone(), Rational::one()], offset: qy - &s * qx };
        (cd + v, witness)
    };
    let up_result = |a: Approximation| {
        let (v, s) = sweep(a);
        let witness = Halfplane { normal: [-s.clone(), -Rational::one()], offset: -qy - &s * qx };
        (cu + v, witness)
    };
    let (depth, witness) = if 4 * ed < eu {
        down_result(ad)
    } else if ed > 4 * eu {
        up_result(au)
    } else {
        let d = down_result(ad);
        let u = up_result(au);
        if u.0 < d.0 {
            u
        } else {
            d
        }
    };
    // p is inside iff the direction p - q lies below (or, for the up
    // halfplane, above) the witness line.
    let slope = Slope { num: -witness.normal[0].numer().clone(), den: witness.normal[0].denom().clone() };
    let sign = if witness.normal[1].is_positive() { BigInt::one() } else { -BigInt::one() };
    let inside = dirs.iter().filter(|v| &sign * &v.y * &slope.den <= &slope.num * &v.x).count();
    if inside != depth || !witness.on_boundary(q) {
        return Err(TverbergError::Internal(format!("depth witness holds {inside} points, expected {depth}")));
    }
    Ok(PlanarDepthResult { depth, witness })
}
