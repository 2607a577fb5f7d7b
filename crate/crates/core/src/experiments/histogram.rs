//! Law of the component sizes left when one grid edge is removed from a
//! uniform spanning tree.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::experiments::edge_split::EdgeSplitSampler;
use crate::experiments::stats::run_trials;
use crate::planar::{build_grid, Orientation};
use crate::rng::RngStream;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HistogramConfig {
    pub m: usize,
    pub n: usize,
    pub col: usize,
    pub row: usize,
    pub orientation: Orientation,
    pub trials: u64,
    pub seed: u64,
    pub workers: usize,
    pub bin_size: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bin {
    pub size_lo: usize,
    pub size_hi: usize,
    pub count: u64,
}

/// `counts[s]` is the number of trials in which the edge was in the tree and
/// the component of its lower-left endpoint had `s` vertices. Trials without
/// the edge are not counted anywhere.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Histogram {
    pub vertices: usize,
    pub trials: u64,
    pub counts: Vec<u64>,
}

pub fn run_histogram(config: &HistogramConfig) -> Result<Histogram> {
    if config.trials == 0 || config.bin_size == 0 {
        return Err(Error::InvalidParameter("trials and bin size must be at least 1".into()));
    }
    let g = build_grid(config.m, config.n)?;
    let grid = g.grid().expect("grid embedding");
    let exists = match config.orientation {
        Orientation::Horizontal => config.col + 1 < config.m && config.row < config.n,
        Orientation::Vertical => config.col < config.m && config.row + 1 < config.n,
    };
    if !exists {
        return Err(Error::InvalidParameter(format!(
            "no {} edge at ({}, {}) in a {}x{} grid",
            config.orientation.as_str(),
            config.col,
            config.row,
            config.m,
            config.n
        )));
    }
    let e = grid.edge(config.col, config.row, config.orientation);
    let vertices = grid.num_vertices();
    let proto = EdgeSplitSampler::new(&g)?;
    let counts = run_trials(
        config.trials,
        config.workers,
        || proto.clone(),
        || vec![0u64; vertices],
        |s, t, counts| {
            let mut rng = RngStream::new(config.seed, t).derive(e as u64);
            if let Some(b) = s.sample(e, &mut rng)?.below {
                counts[b] += 1;
            }
            Ok(())
        },
    )?;
    Ok(Histogram { vertices, trials: config.trials, counts })
}

impl Histogram {
    /// Probability mass observed; below one whenever the edge is sometimes
    /// missing from the tree.
    pub fn mass(&self) -> f64 {
        self.counts.iter().sum::<u64>() as f64 / self.trials as f64
    }

    /// Bins of `bin_size` consecutive sizes over `1..vertices`, aligned so
    /// that one bin is centred on `vertices / 2` (exactly when `bin_size` is
    /// odd).
    pub fn bins(&self, bin_size: usize) -> Vec<Bin> {
        assert!(bin_size > 0);
        let last = self.vertices.saturating_sub(1);
        if last == 0 {
            return Vec::new();
        }
        let centre_lo = (self.vertices / 2).saturating_sub(bin_size / 2);
        // Lowest bin start at or below size 1 congruent to centre_lo.
        let offset = (centre_lo as isize - 1).rem_euclid(bin_size as isize) as usize;
        let mut lo = 1isize - (if offset == 0 { 0 } else { (bin_size - offset) as isize });
        let mut bins = Vec::new();
        while lo <= last as isize {
            let hi = lo + bin_size as isize - 1;
            let (a, b) = (lo.max(1) as usize, (hi as usize).min(last));
            bins.push(Bin { size_lo: a, size_hi: b, count: self.counts[a..=b].iter().sum() });
            lo = hi + 1;
        }
        bins
    }

    /// Total variation between the size law and its mirror image
    /// `s -> vertices - s`, both normalized by the trial count.
    pub fn reflected_tv(&self) -> f64 {
        let n = self.vertices;
        let t = self.trials as f64;
        0.5 * (1..n).map(|s| (self.counts[s] as f64 - self.counts[n - s] as f64).abs() / t).sum::<f64>()
    }

    /// Whether the exact-balance count strictly exceeds the counts of the
    /// `radius` sizes on either side of it.
    pub fn balance_dominates(&self, radius: usize) -> bool {
        if !self.vertices.is_multiple_of(2) {
            return false;
        }
        let h = self.vertices / 2;
        let centre = self.counts[h];
        (1..=radius).all(|d| {
            let left = h.checked_sub(d).filter(|&s| s >= 1).map_or(0, |s| self.counts[s]);
            let right = if h + d < self.vertices { self.counts[h + d] } else { 0 };
            centre > left && centre > right
        })
    }

    pub fn write_csv(&self, bin_size: usize, mut out: impl Write) -> Result<()> {
        let io = |e: std::io::Error| Error::InvalidParameter(e.to_string());
        writeln!(out, "size_lo,size_hi,count,trials").map_err(io)?;
        for b in self.bins(bin_size) {
            writeln!(out, "{},{},{},{}", b.size_lo, b.size_hi, b.count, self.trials).map_err(io)?;
        }
        Ok(())
    }
}
