//! Seeded integer point sets for benchmarks and tests.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::error::Result;
use crate::geom::PointSet;
use crate::random::rng;

/// Coordinates are drawn in `[-SCALE, SCALE]`.
pub const SCALE: i64 = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Uniform,
    Gaussian,
    /// Grid points with a small random offset each.
    Grid,
    /// Points near a sphere, so most of them are extreme and deep points
    /// are rare.
    Shallow,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::Uniform, Family::Gaussian, Family::Grid, Family::Shallow];

    pub fn name(self) -> &'static str {
        match self {
            Family::Uniform => "uniform",
            Family::Gaussian => "gaussian",
            Family::Grid => "grid",
            Family::Shallow => "shallow",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| format!("unknown family {s:?}; expected uniform, gaussian, grid or shallow"))
    }
}

pub fn generate(family: Family, n: usize, d: usize, seed: u64) -> Result<PointSet> {
    let mut rng = rng(seed);
    let normal = Normal::new(0.0, SCALE as f64 / 4.0).expect("positive deviation");
    let rows: Vec<Vec<i64>> = match family {
        Family::Uniform => (0..n).map(|_| (0..d).map(|_| rng.random_range(-SCALE..=SCALE)).collect()).collect(),
        Family::Gaussian => (0..n)
            .map(|_| (0..d).map(|_| (normal.sample(&mut rng).round() as i64).clamp(-SCALE, SCALE)).collect())
            .collect(),
        Family::Grid => {
            let side = (n as f64).powf(1.0 / d.max(1) as f64).ceil().max(1.0) as usize;
            let step = 2 * SCALE / side as i64;
            let jitter = (step / 64).max(1);
            (0..n)
                .map(|i| {
                    let mut k = i;
                    (0..d)
                        .map(|_| {
                            let c = (k % side) as i64;
                            k /= side;
                            -SCALE + step / 2 + c * step + rng.random_range(-jitter..=jitter)
                        })
                        .collect()
                })
                .collect()
        }
        Family::Shallow => (0..n)
            .map(|_| {
                let v: Vec<f64> = (0..d).map(|_| normal.sample(&mut rng)).collect();
                let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
                v.iter().map(|x| (x / norm * SCALE as f64).round() as i64).collect()
            })
            .collect(),
    };
    PointSet::with_dim(d, rows.iter().map(|r| crate::geom::Point::from_ints(r)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;

    #[test]
    fn deterministic_and_in_range() {
        for f in Family::ALL {
            let a = generate(f, 50, 3, 7).unwrap();
            assert_eq!(a, generate(f, 50, 3, 7).unwrap());
            assert_eq!(a.len(), 50);
            assert_eq!(a.dim(), 3);
            let bound = crate::geom::int(SCALE);
            assert!(a.points().iter().flat_map(|p| p.coords()).all(|c| c.abs() <= bound), "{f}");
        }
    }

    #[test]
    fn names_round_trip() {
        for f in Family::ALL {
            assert_eq!(f.name().parse::<Family>().unwrap(), f);
        }
    }
}
