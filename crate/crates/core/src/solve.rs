//! One entry point over every partition algorithm, with the rank each one
//! guarantees.

use std::fmt;
use std::str::FromStr;

use crate::error::Result;
use crate::exact::{exact_tverberg_with, ExactParams};
use crate::geom::{rat, PointSet};
use crate::lowdim::{extract_tverberg, ExtractParams};
use crate::planar::birch_partition;
use crate::projection::project_tverberg;
use crate::random::{
    certified_coloring, child_seed, net_size, random_partition_with_certificate, random_partition_with_point, ColoringParams,
};
use crate::sites::{buffered_tverberg, miller_sheehy, Site};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    Exact,
    Birch,
    Project,
    MillerSheehy,
    Buffered,
    Random,
    RandomLp,
    Lowdim,
}

impl Algorithm {
    pub const ALL: [Algorithm; 8] = [
        Algorithm::Exact,
        Algorithm::Birch,
        Algorithm::Project,
        Algorithm::MillerSheehy,
        Algorithm::Buffered,
        Algorithm::Random,
        Algorithm::RandomLp,
        Algorithm::Lowdim,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Exact => "exact",
            Algorithm::Birch => "birch",
            Algorithm::Project => "project",
            Algorithm::MillerSheehy => "ms",
            Algorithm::Buffered => "buffered",
            Algorithm::Random => "random",
            Algorithm::RandomLp => "random-lp",
            Algorithm::Lowdim => "lowdim",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Algorithm::ALL.into_iter().find(|a| a.name() == s).ok_or_else(|| {
            let names: Vec<&str> = Algorithm::ALL.iter().map(|a| a.name()).collect();
            format!("unknown algorithm {s:?}; expected one of {}", names.join(", "))
        })
    }
}

/// Base solver run on the buffer of the buffered engine.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BaseSolver {
    Project,
    RandomLp,
    Birch,
}

impl FromStr for BaseSolver {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "project" => Ok(BaseSolver::Project),
            "random-lp" => Ok(BaseSolver::RandomLp),
            "birch" => Ok(BaseSolver::Birch),
            _ => Err(format!("unknown base solver {s:?}; expected project, random-lp or birch")),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveOptions {
    pub seed: u64,
    pub delta: f64,
    pub base: BaseSolver,
    pub extract: ExtractParams,
    pub exact: ExactParams,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            seed: 0,
            delta: 0.5,
            base: BaseSolver::Project,
            extract: ExtractParams::default(),
            exact: ExactParams::default(),
        }
    }
}

/// Runs the LP coloring with a power-of-two number of classes when the
/// buffer holds at least one class, and the recycling engine otherwise.
fn random_lp_or_recycle(set: &PointSet, seed: u64) -> Result<Site> {
    match ColoringParams::tverberg(set.len(), set.dim(), seed) {
        Ok(mut params) => {
            params.colors = 1 << params.colors.ilog2();
            certified_coloring(set, &params)
        }
        Err(e) if e.is_precondition() => miller_sheehy(set).map(|(s, _)| s),
        Err(e) => Err(e),
    }
}

pub fn solve(algo: Algorithm, set: &PointSet, opts: &SolveOptions) -> Result<Site> {
    match algo {
        Algorithm::Exact => Ok(exact_tverberg_with(set, &opts.exact)?.site),
        Algorithm::Birch => birch_partition(set),
        Algorithm::Project => project_tverberg(set),
        Algorithm::MillerSheehy => Ok(miller_sheehy(set)?.0),
        Algorithm::Buffered => {
            let mut calls = 0u64;
            let base = opts.base;
            let seed = opts.seed;
            let run = |sub: &PointSet| {
                calls += 1;
                match base {
                    BaseSolver::Project => project_tverberg(sub),
                    BaseSolver::Birch => birch_partition(sub),
                    BaseSolver::RandomLp => random_lp_or_recycle(sub, child_seed(seed, calls)),
                }
            };
            Ok(buffered_tverberg(set, opts.delta, run)?.0)
        }
        Algorithm::Random => Ok(random_partition_with_point(set, opts.seed)?.site),
        Algorithm::RandomLp => random_partition_with_certificate(set, opts.seed),
        Algorithm::Lowdim => extract_tverberg(set, opts.delta, opts.seed, &opts.extract),
    }
}

/// The rank `algo` guarantees on `n` points in `R^d` (with high probability
/// for the randomized ones). Zero when the input is outside the range the
/// guarantee covers.
pub fn rank_bound(algo: Algorithm, n: usize, d: usize, delta: f64) -> usize {
    let d1 = d + 1;
    let sq = d1 * d1;
    match algo {
        Algorithm::Exact => n.div_ceil(d1),
        Algorithm::Birch => n / 3,
        Algorithm::Project if d < 2 => 0,
        Algorithm::Project if d % 2 == 0 => n / 3usize.pow(d as u32 / 2),
        Algorithm::Project => n / (2 * 3usize.pow((d as u32 - 1) / 2)),
        Algorithm::MillerSheehy if n >= 8 * d * sq => n.div_ceil(2 * sq),
        Algorithm::MillerSheehy => usize::from(n > 0),
        Algorithm::Buffered => ((1.0 - delta) * n as f64 / (2 * sq) as f64).ceil() as usize,
        Algorithm::Random => n / net_size(d, &rat(1, (2 * d * d).max(1) as i64)),
        Algorithm::RandomLp => n / net_size(d, &rat(1, d1 as i64)),
        Algorithm::Lowdim => ((1.0 - delta) * n as f64 / (d * d1).max(1) as f64).floor() as usize,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::verify_site;
    use rand::Rng;

    #[test]
    fn names_round_trip() {
        for a in Algorithm::ALL {
            assert_eq!(a.name().parse::<Algorithm>().unwrap(), a);
        }
        assert!("nope".parse::<Algorithm>().is_err());
    }

    #[test]
    fn bounds_follow_the_formulas() {
        assert_eq!(rank_bound(Algorithm::Birch, 30, 2, 0.5), 10);
        assert_eq!(rank_bound(Algorithm::Project, 60, 3, 0.5), 10);
        assert_eq!(rank_bound(Algorithm::Project, 90, 4, 0.5), 10);
        assert_eq!(rank_bound(Algorithm::Project, 540, 7, 0.5), 10);
        assert_eq!(rank_bound(Algorithm::MillerSheehy, 200, 2, 0.5), 12);
        assert_eq!(rank_bound(Algorithm::Buffered, 600, 2, 0.5), 17);
        assert_eq!(rank_bound(Algorithm::Buffered, 2000, 3, 0.25), 47);
        assert_eq!(rank_bound(Algorithm::Lowdim, 600, 2, 0.5), 50);
        assert_eq!(rank_bound(Algorithm::Exact, 9, 2, 0.5), 3);
        assert_eq!(rank_bound(Algorithm::RandomLp, 930, 2, 0.5), 3);
    }

    #[test]
    fn every_algorithm_meets_its_bound() {
        let mut rng = crate::random::rng(17);
        let pts: Vec<Vec<i64>> = (0..900).map(|_| vec![rng.random_range(-1_000_000..1_000_000), rng.random_range(-1_000_000..1_000_000)]).collect();
        let big = PointSet::from_ints(&pts).unwrap();
        let small = big.subset(&(0..12).collect::<Vec<_>>());
        let opts = SolveOptions::default();
        for algo in Algorithm::ALL {
            let set = match algo {
                Algorithm::Exact => &small,
                Algorithm::Random => continue,
                _ => &big,
            };
            let site = solve(algo, set, &opts).unwrap();
            let r = verify_site(set, &site);
            assert!(r.valid, "{algo}: {:?}", r.violations);
            assert!(site.rank() >= rank_bound(algo, set.len(), 2, opts.delta), "{algo}: rank {}", site.rank());
        }
    }

    #[test]
    fn buffered_with_lp_base_in_space() {
        let mut rng = crate::random::rng(18);
        let pts: Vec<Vec<i64>> = (0..600).map(|_| (0..3).map(|_| rng.random_range(-1_000_000..1_000_000)).collect()).collect();
        let set = PointSet::from_ints(&pts).unwrap();
        let opts = SolveOptions { delta: 0.25, base: BaseSolver::RandomLp, ..SolveOptions::default() };
        let site = solve(Algorithm::Buffered, &set, &opts).unwrap();
        assert!(verify_site(&set, &site).valid);
        assert!(site.rank() >= rank_bound(Algorithm::Buffered, 600, 3, 0.25), "rank {}", site.rank());
    }
}
