//! Sites, logs and batches, and the engines that grow sites by merging.

use std::collections::BTreeSet;

mod engine;

pub use engine::{buffered_tverberg, merge_sites, miller_sheehy, HistoryStats};

use crate::geom::Point;
use crate::kernel::ConvexCombination;

/// At most `d+1` point indices whose hull contains the owning site's
/// point, witnessed by exact convex coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct Batch {
    /// Sorted.
    pub indices: Vec<usize>,
    pub witness: ConvexCombination,
}

impl Batch {
    pub fn new(mut indices: Vec<usize>, witness: ConvexCombination) -> Self {
        indices.sort_unstable();
        Batch { indices, witness }
    }

    /// A batch made of exactly the support of `witness`.
    pub fn from_combination(witness: ConvexCombination) -> Self {
        Batch { indices: witness.support(), witness }
    }
}

/// Vertex-disjoint batches; the rank is their number.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Log {
    pub batches: Vec<Batch>,
}

impl Log {
    pub fn rank(&self) -> usize {
        self.batches.len()
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.batches.iter().flat_map(|b| b.indices.iter().copied())
    }
}

/// A point together with a log certifying its Tverberg depth. `unused`
/// lists input points the algorithm set aside.
#[derive(Clone, Debug, PartialEq)]
pub struct Site {
    pub point: Point,
    pub log: Log,
    pub unused: Vec<usize>,
}

impl Site {
    pub fn new(point: Point, batches: Vec<Batch>, mut unused: Vec<usize>) -> Self {
        unused.sort_unstable();
        Site { point, log: Log { batches }, unused }
    }

    pub fn rank(&self) -> usize {
        self.log.rank()
    }

    /// Keeps the first `rank` batches; indices of the dropped ones become
    /// unused.
    pub fn truncate(&mut self, rank: usize) {
        if rank >= self.rank() {
            return;
        }
        for b in self.log.batches.drain(rank..) {
            self.unused.extend(b.indices);
        }
        self.unused.sort_unstable();
    }

    /// Indices referenced by the log.
    pub fn captive(&self) -> BTreeSet<usize> {
        self.log.indices().collect()
    }

    /// Rewrites every index through `map` (used after solving on a
    /// re-indexed subset).
    pub fn remap(self, map: &[usize]) -> Site {
        let batches = self
            .log
            .batches
            .into_iter()
            .map(|b| {
                let weights = b.witness.weights.into_iter().map(|(i, w)| (map[i], w)).collect();
                Batch::new(
                    b.indices.iter().map(|&i| map[i]).collect(),
                    ConvexCombination { weights, target: b.witness.target },
                )
            })
            .collect();
        Site::new(self.point, batches, self.unused.iter().map(|&i| map[i]).collect())
    }
}
