//! Monte Carlo experiments on grids.

pub mod bounds;
pub mod edge_split;
pub mod heatmap;
pub mod histogram;
pub mod stats;
pub mod walk_bounds;

pub use bounds::{bounds_table, BoundsTable, SymbolicBound};
pub use edge_split::{splittability, EdgeSample, EdgeSplitSampler};
pub use heatmap::{balanced_edge_estimates, run_heatmap, vertical_edge_classes, Heatmap, HeatmapCell, HeatmapConfig};
pub use histogram::{run_histogram, Bin, Histogram, HistogramConfig};
pub use stats::{run_trials, wilson_interval, Estimate, Tally, CONFIDENCE};
pub use walk_bounds::{first_exit, run_walk_bounds, write_walk_csv, ExitEvent, WalkBoundRow, WalkBoundsConfig};
