//! Points, point sets and the exact geometric primitives shared by every
//! algorithm: orientation, point-in-simplex and distance to a simplex.

pub mod linalg;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Result, TverbergError};
use linalg::{determinant, solve_system, Field, SystemSolution};

pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(num.into(), den.into())
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(v.into())
}

/// Parses `"num/den"`, an integer, or a decimal such as `-1.25` or `3e-2`.
/// Decimals are converted exactly.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).ok()?;
        let d = BigInt::from_str(d.trim()).ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Rational::new(n, d));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty() {
        return None;
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all = format!("{whole}{frac}");
    let mut value = Rational::from_integer(BigInt::from_str(if all.is_empty() { "0" } else { &all }).ok()?);
    let shift = exp - frac.len() as i32;
    let ten = Rational::from_integer(BigInt::from(10));
    if shift >= 0 {
        value *= num_traits::pow(ten, shift as usize);
    } else {
        value /= num_traits::pow(ten, (-shift) as usize);
    }
    Some(if neg { -value } else { value })
}

/// Canonical `"num/den"` rendering used by every serialized certificate.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Point {
    coords: Vec<Rational>,
}

impl Point {
    pub fn new(coords: Vec<Rational>) -> Self {
        assert!(!coords.is_empty(), "points have dimension at least one");
        Point { coords }
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Point::new(coords.iter().map(|&c| int(c)).collect())
    }

    /// Exact conversion of finite floats.
    pub fn from_f64(coords: &[f64]) -> Option<Self> {
        let coords = coords.iter().map(|&c| Rational::from_float(c)).collect::<Option<Vec<_>>>()?;
        Some(Point::new(coords))
    }

    pub fn origin(dim: usize) -> Self {
        Point::new(vec![Rational::zero(); dim])
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<Rational> {
        self.coords
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coords.iter().map(Field::to_f64).collect()
    }

    pub fn sub(&self, other: &Point) -> Vec<Rational> {
        self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect()
    }

    /// Coordinates `range` of this point as a new point.
    pub fn project(&self, range: std::ops::Range<usize>) -> Point {
        Point::new(self.coords[range].to_vec())
    }

    pub fn squared_distance(&self, other: &Point) -> Rational {
        self.sub(other).iter().map(|x| x * x).sum()
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Weighted sum `sum_i w_i p_i` over `(point, weight)` pairs.
pub fn weighted_sum<'a>(dim: usize, terms: impl IntoIterator<Item = (&'a Point, &'a Rational)>) -> Point {
    let mut acc = vec![Rational::zero(); dim];
    for (p, w) in terms {
        if w.is_zero() {
            continue;
        }
        for (a, c) in acc.iter_mut().zip(p.coords()) {
            *a += w * c;
        }
    }
    Point::new(acc)
}

/// An indexed collection of points of a common dimension. Indices are
/// stable for the lifetime of the set.
#[derive(Clone, Debug, PartialEq)]
pub struct PointSet {
    dim: usize,
    points: Vec<Point>,
}

impl PointSet {
    pub fn new(points: Vec<Point>) -> Result<Self> {
        let dim = points
            .first()
            .map(Point::dim)
            .ok_or_else(|| TverbergError::Precondition("empty point set".into()))?;
        Self::with_dim(dim, points)
    }

    pub fn with_dim(dim: usize, points: Vec<Point>) -> Result<Self> {
        if dim == 0 {
            return Err(TverbergError::Precondition("dimension must be at least 1".into()));
        }
        if let Some(p) = points.iter().find(|p| p.dim() != dim) {
            return Err(TverbergError::DimensionMismatch { expected: dim, found: p.dim() });
        }
        Ok(PointSet { dim, points })
    }

    pub fn from_ints(rows: &[Vec<i64>]) -> Result<Self> {
        Self::new(rows.iter().map(|r| Point::from_ints(r)).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, i: usize) -> &Point {
        &self.points[i]
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    /// The points at `indices`, re-indexed `0..indices.len()`.
    pub fn subset(&self, indices: &[usize]) -> PointSet {
        PointSet { dim: self.dim, points: indices.iter().map(|&i| self.points[i].clone()).collect() }
    }

    /// The same points restricted to the coordinates in `range`.
    pub fn project(&self, range: std::ops::Range<usize>) -> PointSet {
        PointSet { dim: range.len(), points: self.points.iter().map(|p| p.project(range.clone())).collect() }
    }

    pub fn check_dim(&self, q: &Point) -> Result<()> {
        if q.dim() != self.dim {
            return Err(TverbergError::DimensionMismatch { expected: self.dim, found: q.dim() });
        }
        Ok(())
    }

    /// Looks for `d+1` affinely dependent points. All subsets are examined
    /// when there are at most `budget` of them; otherwise `budget` subsets
    /// drawn deterministically from `seed` are tested.
    pub fn general_position_violation(&self, budget: usize, seed: u64) -> Option<Vec<usize>> {
        use rand::seq::index::sample;
        let k = self.dim + 1;
        let n = self.len();
        if n < k {
            return None;
        }
        let dependent = |idx: &[usize]| {
            let rows: Vec<Vec<Rational>> = idx
                .iter()
                .map(|&i| {
                    let mut r = self.points[i].coords().to_vec();
                    r.push(Rational::one());
                    r
                })
                .collect();
            rank(&rows, k) < k
        };
        let total = binomial(n, k);
        if total <= budget as f64 {
            let mut idx: Vec<usize> = (0..k).collect();
            loop {
                if dependent(&idx) {
                    return Some(idx);
                }
                if !next_combination(&mut idx, n) {
                    return None;
                }
            }
        }
        let mut rng = crate::random::rng(seed);
        for _ in 0..budget {
            let mut idx = sample(&mut rng, n, k).into_vec();
            idx.sort_unstable();
            if dependent(&idx) {
                return Some(idx);
            }
        }
        None
    }
}

pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Advances `idx` to the next `k`-combination of `0..n` in lexicographic
/// order.
pub(crate) fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    for i in (0..k).rev() {
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn rank<T: Field>(rows: &[Vec<T>], cols: usize) -> usize {
    let mut m = rows.to_vec();
    linalg::rref(&mut m, cols).len()
}

/// Vertex indices (into a [`PointSet`]) of a possibly degenerate simplex.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Simplex(Vec<usize>);

impl Simplex {
    pub fn new(vertices: Vec<usize>) -> Result<Self> {
        let mut sorted = vertices.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(TverbergError::Precondition("simplex vertices must be distinct".into()));
        }
        Ok(Simplex(vertices))
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    fn check(&self, set: &PointSet) -> Result<()> {
        if self.0.len() > set.dim() + 1 {
            return Err(TverbergError::Precondition(format!(
                "simplex has {} vertices in dimension {}",
                self.0.len(),
                set.dim()
            )));
        }
        if let Some(&i) = self.0.iter().find(|&&i| i >= set.len()) {
            return Err(TverbergError::Precondition(format!("vertex index {i} out of range")));
        }
        Ok(())
    }
}

/// Sign of the lifted `(d+1) x (d+1)` determinant with rows `(p_i, 1)`.
pub fn orientation(points: &[Point]) -> Result<i8> {
    let d = points.first().map(Point::dim).unwrap_or(0);
    if points.len() != d + 1 {
        return Err(TverbergError::DimensionMismatch { expected: d + 1, found: points.len() });
    }
    if let Some(p) = points.iter().find(|p| p.dim() != d) {
        return Err(TverbergError::DimensionMismatch { expected: d, found: p.dim() });
    }
    let rows: Vec<Vec<Rational>> = points
        .iter()
        .map(|p| {
            let mut r = p.coords().to_vec();
            r.push(Rational::one());
            r
        })
        .collect();
    let det = determinant(&rows);
    Ok(if det.is_positive() {
        1
    } else if det.is_negative() {
        -1
    } else {
        0
    })
}

/// Sign of the 2D cross product `a x b`.
pub fn cross_sign(a: &[Rational], b: &[Rational]) -> i8 {
    let v = &a[0] * &b[1] - &a[1] * &b[0];
    if v.is_positive() {
        1
    } else if v.is_negative() {
        -1
    } else {
        0
    }
}

/// Convex coordinates of `q` over `vertices`, or `None` when `q` is not in
/// their hull. Affinely dependent vertex sets are handled by recursing on
/// subsets.
pub fn barycentric<T: Field>(q: &[T], vertices: &[Vec<T>]) -> Option<Vec<T>> {
    let k = vertices.len();
    if k == 0 {
        return None;
    }
    let d = q.len();
    let mut a: Vec<Vec<T>> = (0..d).map(|c| vertices.iter().map(|v| v[c].clone()).collect()).collect();
    a.push(vec![T::one(); k]);
    let mut b: Vec<T> = q.to_vec();
    b.push(T::one());
    match solve_system(&a, &b, k).ok()? {
        SystemSolution::Inconsistent => None,
        SystemSolution::Unique(x) => {
            if x.iter().all(|w| !w.is_negative() || w.is_negligible()) {
                Some(x.into_iter().map(|w| if w.is_negative() { T::zero() } else { w }).collect())
            } else {
                None
            }
        }
        SystemSolution::Underdetermined { .. } => {
            // Degenerate vertex set: q is in the hull iff it is in the hull
            // of some proper subset.
            (0..k).find_map(|skip| {
                let sub: Vec<Vec<T>> = vertices
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != skip)
                    .map(|(_, v)| v.clone())
                    .collect();
                barycentric(q, &sub).map(|mut w| {
                    w.insert(skip, T::zero());
                    w
                })
            })
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SimplexMembership {
    /// Convex coordinates aligned with the simplex vertex order.
    Inside(Vec<Rational>),
    Outside,
}

pub fn point_in_simplex(q: &Point, simplex: &Simplex, set: &PointSet) -> Result<SimplexMembership> {
    set.check_dim(q)?;
    simplex.check(set)?;
    let verts: Vec<Vec<Rational>> = simplex.0.iter().map(|&i| set.point(i).coords().to_vec()).collect();
    Ok(match barycentric(q.coords(), &verts) {
        Some(w) => SimplexMembership::Inside(w),
        None => SimplexMembership::Outside,
    })
}

/// Nearest point of a simplex hull to a query point.
#[derive(Clone, Debug, PartialEq)]
pub struct NearestPoint<T> {
    pub squared_distance: T,
    pub point: Vec<T>,
    /// Positions (within the simplex vertex list) of the smallest face
    /// containing `point`.
    pub face: Vec<usize>,
    /// Convex coordinates of `point` over `face`.
    pub weights: Vec<T>,
}

/// Nearest point of `hull(vertices)` to `q` by enumerating every face,
/// projecting `q` onto its affine span and keeping the closest projection
/// that lands inside the face.
pub fn nearest_in_hull<T: Field>(q: &[T], vertices: &[Vec<T>]) -> Option<NearestPoint<T>> {
    let k = vertices.len();
    if k == 0 {
        return None;
    }
    let d = q.len();
    let mut best: Option<NearestPoint<T>> = None;
    for mask in 1u32..(1u32 << k) {
        let face: Vec<usize> = (0..k).filter(|i| mask & (1 << i) != 0).collect();
        let Some((point, weights)) = project_onto_face(q, vertices, &face) else {
            continue;
        };
        let dist: T = (0..d).fold(T::zero(), |acc, c| {
            let diff = point[c].clone() - q[c].clone();
            acc + diff.clone() * diff
        });
        let better = match &best {
            None => true,
            Some(b) => {
                let gap = dist.clone() - b.squared_distance.clone();
                if gap.is_negligible() {
                    face.len() < b.face.len()
                } else {
                    gap.is_negative()
                }
            }
        };
        if better {
            best = Some(NearestPoint { squared_distance: dist, point, face, weights });
        }
    }
    best.map(|mut b| {
        // Drop vertices carrying no weight so the face is minimal.
        let keep: Vec<usize> = (0..b.face.len()).filter(|&i| !b.weights[i].is_negligible()).collect();
        if !keep.is_empty() && keep.len() < b.face.len() {
            b.face = keep.iter().map(|&i| b.face[i]).collect();
            b.weights = keep.iter().map(|&i| b.weights[i].clone()).collect();
        }
        b
    })
}

fn project_onto_face<T: Field>(q: &[T], vertices: &[Vec<T>], face: &[usize]) -> Option<(Vec<T>, Vec<T>)> {
    let d = q.len();
    let base = &vertices[face[0]];
    if face.len() == 1 {
        return Some((base.clone(), vec![T::one()]));
    }
    let edges: Vec<Vec<T>> = face[1..]
        .iter()
        .map(|&i| (0..d).map(|c| vertices[i][c].clone() - base[c].clone()).collect())
        .collect();
    let m = edges.len();
    let dot = |a: &[T], b: &[T]| a.iter().zip(b).fold(T::zero(), |acc, (x, y)| acc + x.clone() * y.clone());
    let rel: Vec<T> = (0..d).map(|c| q[c].clone() - base[c].clone()).collect();
    let gram: Vec<Vec<T>> = (0..m).map(|i| (0..m).map(|j| dot(&edges[i], &edges[j])).collect()).collect();
    let rhs: Vec<T> = edges.iter().map(|e| dot(e, &rel)).collect();
    let mu = match solve_system(&gram, &rhs, m).ok()? {
        SystemSolution::Unique(mu) => mu,
        _ => return None,
    };
    let lead = mu.iter().fold(T::one(), |acc, x| acc - x.clone());
    let mut weights = Vec::with_capacity(m + 1);
    weights.push(lead);
    weights.extend(mu.iter().cloned());
    if weights.iter().any(|w| w.is_negative() && !w.is_negligible()) {
        return None;
    }
    let point: Vec<T> = (0..d)
        .map(|c| {
            edges.iter().zip(&mu).fold(base[c].clone(), |acc, (e, w)| acc + e[c].clone() * w.clone())
        })
        .collect();
    let weights = weights.into_iter().map(|w| if w.is_negative() { T::zero() } else { w }).collect();
    Some((point, weights))
}

/// Exact distance report for [`dist_point_simplex`].
#[derive(Clone, Debug, PartialEq)]
pub struct SimplexDistance {
    pub squared_distance: Rational,
    pub distance: f64,
    pub nearest: Point,
    /// Vertex indices (into the point set) of the supporting face.
    pub face: Vec<usize>,
}

pub fn dist_point_simplex(q: &Point, simplex: &Simplex, set: &PointSet) -> Result<SimplexDistance> {
    set.check_dim(q)?;
    simplex.check(set)?;
    if simplex.0.is_empty() {
        return Err(TverbergError::Precondition("empty simplex".into()));
    }
    if set.dim() + 1 > 9 {
        return Err(TverbergError::ScaleCap("face enumeration supports d <= 8".into()));
    }
    let verts: Vec<Vec<Rational>> = simplex.0.iter().map(|&i| set.point(i).coords().to_vec()).collect();
    let near = nearest_in_hull(q.coords(), &verts)
        .ok_or_else(|| TverbergError::Internal("no face admits a projection".into()))?;
    Ok(SimplexDistance {
        distance: Field::to_f64(&near.squared_distance).sqrt(),
        squared_distance: near.squared_distance,
        nearest: Point::new(near.point),
        face: near.face.iter().map(|&i| simplex.0[i]).collect(),
    })
}
