//! Lower cone distribution functions, lattice-valued multivariate quantiles,
//! Galois closures and random-set capacity functionals.
//!
//! The crate is `no_std` (it needs `alloc`). All types are immutable after
//! construction and every query is a pure function, so values can be shared
//! freely across threads.

#![no_std]
#![allow(clippy::needless_range_loop)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod cdf;
pub mod cone;
pub mod distribution;
pub mod error;
pub mod galois;
pub mod linalg;
pub mod normal;
pub mod probe;
pub mod quantile;
pub mod random_set;
pub mod region;
pub mod simplex;
pub mod sweep;

pub use cdf::{CdfValue, ConeCdf, PhiComparison};
pub use cone::{direction_base, ConvexCone, DirectionKind, DirectionSet, DualArc, Halfspace, DEFAULT_TOL};
pub use distribution::{DistributionModel, EmpiricalSample, GaussianModel, MASS_TOL};
pub use error::{Error, Result};
pub use galois::{ClosureReport, GenSet, PhiIdentityReport, SetFamily};
pub use linalg::Vector;
pub use probe::ProbeGrid;
pub use quantile::QuantileFn;
pub use random_set::{CapacityEstimate, CompactTestSet, SeededRng};
pub use region::{CRegion, Rect, RegionShape};
