//! Seeded sampling: random colorings, their validation, and the iterated
//! Radon centerpoint.
//!
//! All randomness comes from ChaCha8 (`rand_chacha` 0.9) seeded with a
//! 64-bit seed; retries switch the stream number, so every attempt is
//! reproducible from the caller's seed alone.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

mod partition;

pub use partition::{
    certified_coloring, child_seed, net_size, random_coloring_partition, random_partition_with_certificate, random_partition_with_point,
    ColoringParams, Coloring, PointPartition, RETRY_CAP,
};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Generator for attempt `stream` derived from `seed`.
pub fn rng_stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = rng(seed);
    r.set_stream(stream);
    r
}

use rand::Rng;

use crate::error::{Result, TverbergError};
use crate::geom::{Point, PointSet, Rational};
use crate::kernel::radon_partition;

/// Coordinates wider than this many bits are rounded to the nearest double
/// between tournament levels.
const SNAP_BITS: u64 = 192;

fn snap(p: Point) -> Point {
    let wide = p.coords().iter().any(|c| c.numer().bits() > SNAP_BITS || c.denom().bits() > SNAP_BITS);
    if !wide {
        return p;
    }
    Point::new(
        p.coords()
            .iter()
            .map(|c| Rational::from_float(crate::geom::linalg::Field::to_f64(c)).expect("finite coordinate"))
            .collect(),
    )
}

/// Tournament depth whose leaf count `(d+2)^L` first reaches `n`, capped at
/// six levels.
pub fn default_rounds(n: usize, d: usize) -> usize {
    let mut rounds = 1;
    let mut leaves = d + 2;
    while leaves < n && rounds < 6 {
        leaves *= d + 2;
        rounds += 1;
    }
    rounds
}

/// Approximate centerpoint: `(d+2)^rounds` points drawn with replacement
/// are replaced, group by group, by Radon points until one remains.
pub fn iterated_radon_centerpoint(set: &PointSet, seed: u64, rounds: usize) -> Result<Point> {
    if set.is_empty() {
        return Err(TverbergError::Precondition("empty point set".into()));
    }
    let d = set.dim();
    let mut rng = rng(seed);
    let leaves = (d + 2).checked_pow(rounds as u32).filter(|&l| l <= 1 << 20).ok_or_else(|| {
        TverbergError::ScaleCap(format!("(d+2)^{rounds} leaves is too many"))
    })?;
    let mut level: Vec<Point> = (0..leaves).map(|_| set.point(rng.random_range(0..set.len())).clone()).collect();
    while level.len() > 1 {
        level = level
            .chunks(d + 2)
            .map(|group| radon_partition(group).map(|r| snap(r.point)))
            .collect::<Result<Vec<_>>>()?;
    }
    Ok(level.pop().unwrap())
}
