//! Tverberg points and certified Tverberg partitions.
//!
//! Every partition algorithm returns a [`Site`]: a point together with a log
//! of vertex-disjoint batches, each carrying exact rational convex
//! coefficients that reproduce the point. [`verify_site`] re-checks any site
//! from scratch.

pub mod error;
pub mod exact;
pub mod generate;
pub mod geom;
pub mod kernel;
pub mod lowdim;
pub mod planar;
pub mod projection;
pub mod random;
pub mod report;
pub mod sites;
pub mod solve;
pub mod verify;

pub use error::{Result, TverbergError};
pub use geom::{Point, PointSet, Rational};
pub use sites::{Batch, Log, Site};
pub use solve::{rank_bound, solve, Algorithm, BaseSolver, SolveOptions};
pub use verify::{verify_site, VerifyReport};
