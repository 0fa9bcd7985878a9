use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use rand::RngCore;

use super::{default_rounds, iterated_radon_centerpoint, rng_stream};
use crate::error::{Result, TverbergError};
use crate::geom::{rat, Point, PointSet, Rational};
use crate::kernel::{common_point, hull_membership, CommonPoint, ConvexCombination, HullMembership};
use crate::sites::{Batch, Site};

/// Resamples allowed before giving up.
pub const RETRY_CAP: u64 = 16;

/// Seed for attempt `attempt` of a run seeded with `seed`.
pub fn child_seed(seed: u64, attempt: u64) -> u64 {
    rng_stream(seed, attempt).next_u64()
}

/// Size of an `epsilon`-net for halfspaces in `R^d`:
/// `ceil(8(d+1)/epsilon * ln(16(d+1)))`.
pub fn net_size(d: usize, epsilon: &Rational) -> usize {
    let e = epsilon.to_f64().expect("finite epsilon");
    let d1 = (d + 1) as f64;
    (8.0 * d1 / e * (16.0 * d1).ln()).ceil() as usize
}

#[derive(Clone, Debug, PartialEq)]
pub struct ColoringParams {
    pub epsilon: Rational,
    /// Points per color class.
    pub net_size: usize,
    pub colors: usize,
    pub seed: u64,
}

impl ColoringParams {
    pub fn new(n: usize, d: usize, epsilon: Rational, seed: u64) -> Result<Self> {
        let net_size = net_size(d, &epsilon).max(d + 2);
        let colors = n / net_size;
        if colors == 0 {
            return Err(TverbergError::Precondition(format!("{n} points are fewer than the net size {net_size}")));
        }
        Ok(ColoringParams { epsilon, net_size, colors, seed })
    }

    /// `epsilon = 1/(d+1)`.
    pub fn tverberg(n: usize, d: usize, seed: u64) -> Result<Self> {
        Self::new(n, d, rat(1, d as i64 + 1), seed)
    }

    /// `epsilon = 1/(2d^2)`.
    pub fn centerpoint(n: usize, d: usize, seed: u64) -> Result<Self> {
        Self::new(n, d, rat(1, 2 * (d * d) as i64), seed)
    }
}

/// Color classes of a random coloring; indices left over after `k` full
/// classes are returned separately.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coloring {
    pub classes: Vec<Vec<usize>>,
    pub unused: Vec<usize>,
}

fn color(n: usize, params: &ColoringParams, attempt: u64) -> Coloring {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut rng_stream(params.seed, attempt));
    let size = params.net_size;
    let mut classes: Vec<Vec<usize>> = perm[..params.colors * size].chunks(size).map(<[usize]>::to_vec).collect();
    classes.iter_mut().for_each(|c| c.sort_unstable());
    let mut unused = perm[params.colors * size..].to_vec();
    unused.sort_unstable();
    Coloring { classes, unused }
}

/// A uniformly random coloring into `floor(n/N)` classes of `N` points,
/// `N` the net size for `epsilon = 1/(d+1)`. Intersection of the class
/// hulls is likely but not checked.
pub fn random_coloring_partition(set: &PointSet, seed: u64) -> Result<Coloring> {
    let params = ColoringParams::tverberg(set.len(), set.dim(), seed)?;
    Ok(color(set.len(), &params, 0))
}

fn site_from(point: Point, combos: Vec<ConvexCombination>, n: usize) -> Site {
    let batches: Vec<Batch> = combos.into_iter().map(Batch::from_combination).collect();
    let mut used = vec![false; n];
    batches.iter().flat_map(|b| &b.indices).for_each(|&i| used[i] = true);
    Site::new(point, batches, (0..n).filter(|&i| !used[i]).collect())
}

#[derive(Clone, Debug, PartialEq)]
pub struct PointPartition {
    pub point: Point,
    pub coloring: Coloring,
    /// One batch per class, reduced to at most `d+1` points of the class.
    pub site: Site,
    pub attempts: u64,
}

/// A random coloring with `epsilon = 1/(2d^2)` together with an iterated
/// Radon point checked to lie in every class hull. Failed checks resample
/// both.
pub fn random_partition_with_point(set: &PointSet, seed: u64) -> Result<PointPartition> {
    let n = set.len();
    let params = ColoringParams::centerpoint(n, set.dim(), seed)?;
    let rounds = default_rounds(n, set.dim());
    let mut reason = String::new();
    'attempts: for attempt in 0..RETRY_CAP {
        let coloring = color(n, &params, attempt);
        let q = iterated_radon_centerpoint(set, child_seed(seed, attempt), rounds)?;
        let mut combos = Vec::with_capacity(coloring.classes.len());
        for (c, class) in coloring.classes.iter().enumerate() {
            match hull_membership(&q, &set.subset(class))? {
                HullMembership::Inside(comb) => combos.push(ConvexCombination {
                    weights: comb.weights.into_iter().map(|(i, w)| (class[i], w)).collect(),
                    target: q.clone(),
                }),
                HullMembership::Outside(_) => {
                    reason = format!("point outside the hull of class {c} (attempt {attempt})");
                    continue 'attempts;
                }
            }
        }
        let site = site_from(q.clone(), combos, n);
        return Ok(PointPartition { point: q, coloring, site, attempts: attempt + 1 });
    }
    Err(TverbergError::RetryCapExceeded { attempts: RETRY_CAP as usize, reason })
}

/// A random coloring with `epsilon = 1/(d+1)` whose class hulls are
/// intersected by linear programming; the site has one batch per class.
pub fn random_partition_with_certificate(set: &PointSet, seed: u64) -> Result<Site> {
    certified_coloring(set, &ColoringParams::tverberg(set.len(), set.dim(), seed)?)
}

/// [`random_partition_with_certificate`] with explicit coloring parameters.
pub fn certified_coloring(set: &PointSet, params: &ColoringParams) -> Result<Site> {
    let n = set.len();
    if params.colors == 0 || params.colors * params.net_size > n {
        return Err(TverbergError::Precondition(format!(
            "{} classes of {} points need more than {n} points",
            params.colors, params.net_size
        )));
    }
    for attempt in 0..RETRY_CAP {
        let coloring = color(n, params, attempt);
        if let CommonPoint::Feasible { point, combinations } = common_point(&coloring.classes, set)? {
            return Ok(site_from(point, combinations, n));
        }
    }
    Err(TverbergError::RetryCapExceeded {
        attempts: RETRY_CAP as usize,
        reason: format!("class hulls of {} colors never intersected", params.colors),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::verify_site;
    use rand::Rng;

    fn random_set(seed: u64, n: usize, d: usize) -> PointSet {
        let mut rng = super::super::rng(seed);
        PointSet::from_ints(&(0..n).map(|_| (0..d).map(|_| rng.random_range(-1_000_000..1_000_000)).collect()).collect::<Vec<_>>())
            .unwrap()
    }

    #[test]
    fn net_sizes() {
        assert_eq!(net_size(2, &rat(1, 3)), 279);
        assert_eq!(net_size(2, &rat(1, 8)), 744);
        assert_eq!(net_size(3, &rat(1, 4)), 533);
    }

    #[test]
    fn coloring_is_a_balanced_partition() {
        let set = random_set(1, 1000, 2);
        let c = random_coloring_partition(&set, 5).unwrap();
        assert_eq!(c.classes.len(), 3);
        assert!(c.classes.iter().all(|k| k.len() == 279));
        let mut all: Vec<usize> = c.classes.iter().flatten().chain(&c.unused).copied().collect();
        all.sort_unstable();
        assert_eq!(all, (0..1000).collect::<Vec<_>>());
        assert_eq!(c, random_coloring_partition(&set, 5).unwrap());
        assert_ne!(c, random_coloring_partition(&set, 6).unwrap());
    }

    #[test]
    fn too_few_points() {
        let set = random_set(2, 100, 2);
        assert!(random_coloring_partition(&set, 0).unwrap_err().is_precondition());
    }

    #[test]
    fn single_class_certificate() {
        let set = random_set(3, 300, 2);
        let site = random_partition_with_certificate(&set, 1).unwrap();
        assert_eq!(site.rank(), 1);
        assert!(verify_site(&set, &site).valid);
    }

    #[test]
    fn certificate_rank_matches_colors() {
        let set = random_set(4, 279 * 4 + 7, 2);
        let site = random_partition_with_certificate(&set, 9).unwrap();
        assert_eq!(site.rank(), 4);
        let r = verify_site(&set, &site);
        assert!(r.valid, "{:?}", r.violations);
    }

    #[test]
    fn point_lies_in_every_class() {
        let set = random_set(5, 744 * 3, 2);
        let pp = random_partition_with_point(&set, 2).unwrap();
        assert_eq!(pp.site.rank(), 3);
        assert!(verify_site(&set, &pp.site).valid);
        for class in &pp.coloring.classes {
            assert!(matches!(hull_membership(&pp.point, &set.subset(class)).unwrap(), HullMembership::Inside(_)));
        }
    }
}
