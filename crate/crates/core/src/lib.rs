//! Uniform spanning trees of planar graphs and balanced partitions drawn from
//! the spanning tree distribution.

pub mod count;
pub mod dual;
pub mod enumerate;
pub mod error;
pub mod experiments;
pub mod forest;
pub mod geometry;
pub mod graph;
pub mod lattice;
pub mod partition;
pub mod planar;
pub mod rng;
pub mod samplers;
pub mod splitting;
pub mod tree;
pub mod walks;

/// Version of this library, echoed into experiment metadata.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub use count::count_spanning_trees;
pub use dual::{compute_dual, DualGraph};
pub use error::{Error, Result};
pub use experiments::Estimate;
pub use forest::{DynamicForest, KForest, LinkCutForest, NaiveForest};
pub use geometry::Point;
pub use graph::Graph;
pub use lattice::{
    build_lattice_region, compatibility_experiment, epsilon_compatible, vertical_strips, LatticeKind, LatticeRegion,
    PlaneGraphD,
};
pub use partition::{contract_partition, Partition};
pub use planar::{build_grid, Grid, Orientation, PlanarEmbedding};
pub use rng::RngStream;
pub use samplers::{
    approx_balanced_sample, perfect_balanced_sample, updown_step, PerfectSampler, SamplerReport, UpDownSampler,
};
pub use splitting::{component_sizes, find_approx_split, find_balanced_split, find_min_imbalance_split, SplitResult};
pub use tree::SpanningTree;
pub use walks::{wilson, wilson_on_dual, wilson_phased};
