//! Lattice approximations of drawings and compatibility of partitions with
//! a drawing's faces.

pub mod compat;
pub mod drawing;
pub mod region;

pub use crate::geometry::hausdorff_distance;
pub use compat::{compatibility_experiment, epsilon_compatible, has_compatible_split, Compatibility};
pub use drawing::{vertical_strips, Curve, PlaneGraphD};
pub use region::{build_lattice_region, LatticeKind, LatticeRegion};
