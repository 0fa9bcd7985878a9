use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_traits::{Signed, Zero};

use super::{Batch, Site};
use crate::error::{Result, TverbergError};
use crate::geom::linalg::Field;
use crate::geom::{barycentric, Point, PointSet, Rational};
use crate::kernel::{integer_affine_dependency, radon_partition, sparsify, ConvexCombination};
use crate::verify::verify_site;

/// Merged points wider than this many bits are moved to the nearest double
/// when every batch still contains the rounded point.
const SNAP_BITS: u64 = 128;

/// Sites created per rank over a whole run.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HistoryStats {
    /// `h` with `2^h` the largest rank created.
    pub max_rank_exponent: u32,
    /// Rank to number of sites ever created with that rank.
    pub count_by_rank: BTreeMap<usize, usize>,
    /// Rank to the number of point slots handled while creating those sites.
    pub work_by_rank: BTreeMap<usize, usize>,
}

impl HistoryStats {
    fn record(&mut self, rank: usize, work: usize) {
        if rank == 0 {
            return;
        }
        *self.count_by_rank.entry(rank).or_default() += 1;
        *self.work_by_rank.entry(rank).or_default() += work;
        self.max_rank_exponent = self.max_rank_exponent.max(rank.ilog2());
    }

    /// Ranks whose count exceeds `(d+2)^(i+1) - 1` for rank `2^(h-i)`.
    pub fn bound_violations(&self, d: usize) -> Vec<String> {
        let h = self.max_rank_exponent;
        let mut out = Vec::new();
        for (&rank, &count) in &self.count_by_rank {
            if !rank.is_power_of_two() || rank > 1 << h {
                continue;
            }
            let i = h - rank.ilog2();
            let bound = (d as u128 + 2).checked_pow(i + 1).map_or(u128::MAX, |b| b - 1);
            if count as u128 > bound {
                out.push(format!("{count} sites of rank {rank}, bound {bound}"));
            }
        }
        out
    }
}

fn snap_point(p: &Point) -> Option<Point> {
    let wide = p.coords().iter().any(|c| c.numer().bits() > SNAP_BITS || c.denom().bits() > SNAP_BITS);
    if !wide {
        return None;
    }
    Some(Point::new(p.coords().iter().map(|c| Rational::from_float(c.to_f64())).collect::<Option<Vec<_>>>()?))
}

/// Convex coordinates of `q` over the points `idx`, from an affine dependency
/// of the points and `q` when it involves `q` with nonnegative weights.
fn coordinates(idx: &[usize], q: &Point, set: &PointSet) -> Option<Vec<Rational>> {
    let mut pts: Vec<&Point> = idx.iter().map(|&i| set.point(i)).collect();
    pts.push(q);
    if let Some(mut mu) = integer_affine_dependency(&pts) {
        let mq = mu.pop().expect("q is last");
        if !mq.is_zero() {
            let w: Vec<Rational> = mu.into_iter().map(|m| Rational::new(-m, mq.clone())).collect();
            if w.iter().all(|x| !x.is_negative()) {
                return Some(w);
            }
        }
    }
    let verts: Vec<Vec<Rational>> = idx.iter().map(|&i| set.point(i).coords().to_vec()).collect();
    barycentric(q.coords(), &verts)
}

/// Re-targets every batch at `q`, or `None` if some batch hull misses it.
fn retarget(batches: &[Batch], q: &Point, set: &PointSet) -> Option<Vec<Batch>> {
    batches
        .iter()
        .map(|b| {
            let w = coordinates(&b.indices, q, set)?;
            let weights = b.indices.iter().zip(w).filter(|(_, w)| !w.is_zero()).map(|(&i, w)| (i, w)).collect();
            Some(Batch { indices: b.indices.clone(), witness: ConvexCombination { weights, target: q.clone() } })
        })
        .collect()
}

/// Merges `d+2` sites of equal rank `r` into one of rank `2r` at their
/// Radon point. Returns the merged site and the log indices it no longer
/// uses.
pub fn merge_sites(sites: &[Site], set: &PointSet) -> Result<(Site, Vec<usize>)> {
    Ok(merge_counted(sites, set)?.0)
}

fn merge_counted(sites: &[Site], set: &PointSet) -> Result<((Site, Vec<usize>), usize)> {
    let d = set.dim();
    if sites.len() != d + 2 {
        return Err(TverbergError::Precondition(format!("merge needs {} sites, got {}", d + 2, sites.len())));
    }
    let r = sites[0].rank();
    if r == 0 || sites.iter().any(|s| s.rank() != r) {
        let ranks: Vec<usize> = sites.iter().map(Site::rank).collect();
        return Err(TverbergError::Precondition(format!("merge needs equal positive ranks, got {ranks:?}")));
    }
    let mut used = BTreeSet::new();
    for i in sites.iter().flat_map(|s| s.log.indices()) {
        if !used.insert(i) {
            return Err(TverbergError::Precondition(format!("logs overlap at index {i}")));
        }
    }
    let points: Vec<Point> = sites.iter().map(|s| s.point.clone()).collect();
    let radon = radon_partition(&points)?;
    let mut batches = Vec::with_capacity(2 * r);
    let mut work = 0;
    for weights in [&radon.weights_a, &radon.weights_b] {
        for j in 0..r {
            let mut combined: BTreeMap<usize, Rational> = BTreeMap::new();
            for (&s, a) in weights {
                let batch = &sites[s].log.batches[j];
                work += batch.indices.len();
                for (&i, w) in &batch.witness.weights {
                    *combined.entry(i).or_insert_with(Rational::zero) += a * w;
                }
            }
            let comb = sparsify(&ConvexCombination { weights: combined, target: radon.point.clone() }, set);
            batches.push(Batch::from_combination(comb));
        }
    }
    let mut point = radon.point;
    if let Some(q) = snap_point(&point) {
        if let Some(b) = retarget(&batches, &q, set) {
            batches = b;
            point = q;
        }
    }
    let merged = Site::new(point, batches, Vec::new());
    let kept = merged.captive();
    let recycled = used.into_iter().filter(|i| !kept.contains(i)).collect();
    Ok(((merged, recycled), work))
}

/// Per-rank FIFO pools shared by both engines. Pool `e` holds sites of rank
/// `2^e`.
struct Pools<'a> {
    set: &'a PointSet,
    pools: Vec<VecDeque<Site>>,
    stats: HistoryStats,
}

impl<'a> Pools<'a> {
    fn new(set: &'a PointSet) -> Self {
        Pools { set, pools: Vec::new(), stats: HistoryStats::default() }
    }

    fn insert(&mut self, site: Site, work: usize) {
        let rank = site.rank();
        debug_assert!(rank.is_power_of_two());
        self.stats.record(rank, work);
        let e = rank.ilog2() as usize;
        if self.pools.len() <= e {
            self.pools.resize_with(e + 1, VecDeque::new);
        }
        self.pools[e].push_back(site);
    }

    /// Merges once at the lowest full rank; returns the recycled indices, or
    /// `None` when no rank has `d+2` sites.
    fn merge_lowest(&mut self) -> Result<Option<Vec<usize>>> {
        let k = self.set.dim() + 2;
        let Some(e) = self.pools.iter().position(|p| p.len() >= k) else {
            return Ok(None);
        };
        let group: Vec<Site> = self.pools[e].drain(..k).collect();
        let ((merged, recycled), work) = merge_counted(&group, self.set)?;
        self.insert(merged, work);
        Ok(Some(recycled))
    }

    /// The first site of the highest rank, with every other index unused.
    fn finish(mut self) -> (Site, HistoryStats) {
        let n = self.set.len();
        let best = self.pools.iter_mut().rev().find_map(VecDeque::pop_front);
        let mut site = best.unwrap_or_else(|| Site::new(Point::origin(self.set.dim()), Vec::new(), Vec::new()));
        let captive = site.captive();
        site.unused = (0..n).filter(|i| !captive.contains(i)).collect();
        (site, self.stats)
    }

    #[cfg(test)]
    fn captive(&self) -> Vec<usize> {
        self.pools.iter().flatten().flat_map(|s| s.log.indices()).collect()
    }
}

fn singleton(i: usize, set: &PointSet) -> Site {
    let comb = ConvexCombination::vertex(i, set);
    Site::new(set.point(i).clone(), vec![Batch::new(vec![i], comb)], Vec::new())
}

/// Recycling engine: every point starts as a rank-1 site; `d+2` sites of
/// equal rank are merged, lowest rank first, and indices dropped by a merge
/// return as rank-1 sites. Returns the highest-rank site.
pub fn miller_sheehy(set: &PointSet) -> Result<(Site, HistoryStats)> {
    let n = set.len();
    if n == 0 {
        return Err(TverbergError::Precondition("empty point set".into()));
    }
    let mut pools = Pools::new(set);
    for i in 0..n {
        pools.insert(singleton(i, set), 1);
    }
    while let Some(recycled) = pools.merge_lowest()? {
        for i in recycled {
            pools.insert(singleton(i, set), 1);
        }
    }
    Ok(pools.finish())
}

/// Buffered engine: free points wait in a buffer; whenever it holds at least
/// `delta * n` of them, `base` runs on the buffer and its log, cut to a
/// power-of-two rank, joins the pools. Indices dropped by merges return to
/// the buffer.
pub fn buffered_tverberg<F>(set: &PointSet, delta: f64, mut base: F) -> Result<(Site, HistoryStats)>
where
    F: FnMut(&PointSet) -> Result<Site>,
{
    let n = set.len();
    if n == 0 {
        return Err(TverbergError::Precondition("empty point set".into()));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(TverbergError::Precondition(format!("delta must lie in (0, 1), got {delta}")));
    }
    let threshold = ((delta * n as f64).ceil() as usize).max(1);
    let mut pools = Pools::new(set);
    let mut buffer: BTreeSet<usize> = (0..n).collect();
    let cap = 16 * n + 64;
    for _ in 0..cap {
        if let Some(recycled) = pools.merge_lowest()? {
            buffer.extend(recycled);
            continue;
        }
        if buffer.len() < threshold {
            return Ok(pools.finish());
        }
        let idx: Vec<usize> = buffer.iter().copied().collect();
        let sub = set.subset(&idx);
        let site = match base(&sub) {
            Ok(s) => s,
            Err(e) if e.is_precondition() => return Ok(pools.finish()),
            Err(e) => return Err(e),
        };
        let report = verify_site(&sub, &site);
        if !report.valid {
            return Err(TverbergError::ContractViolation(format!(
                "base solver returned an invalid site on {} points: {}",
                sub.len(),
                report.violations.join("; ")
            )));
        }
        if site.rank() == 0 {
            return Ok(pools.finish());
        }
        let mut site = site.remap(&idx);
        let rank = site.rank();
        site.truncate(1 << rank.ilog2());
        site.unused.clear();
        for i in site.log.indices() {
            buffer.remove(&i);
        }
        let work = site.log.indices().count();
        pools.insert(site, work);
    }
    Err(TverbergError::NonConvergence(format!("buffered engine did not settle within {cap} steps")))
}
