//! Per-edge probability of being the balanced split edge of a uniform
//! spanning tree of a grid, for vertical edges.
//!
//! Trials are run once per symmetry class and every edge of the class gets
//! the class result.

use std::fmt::Write as _;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::experiments::edge_split::EdgeSplitSampler;
use crate::experiments::stats::{run_trials, Estimate};
use crate::planar::{build_grid, Grid};
use crate::rng::RngStream;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeatmapConfig {
    pub m: usize,
    pub n: usize,
    pub trials: u64,
    pub seed: u64,
    pub workers: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeatmapCell {
    pub col: usize,
    pub row: usize,
    /// Index into `Heatmap::classes`.
    pub class: usize,
    pub estimate: Estimate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Heatmap {
    pub m: usize,
    pub n: usize,
    /// Representative `(col, row)` of each class.
    pub classes: Vec<(usize, usize)>,
    /// Vertical edges in row-major order of their lower endpoints.
    pub cells: Vec<HeatmapCell>,
}

/// Orbits of the vertical edges of the `m x n` grid under the grid's
/// symmetries. Only the mirror images in either axis map vertical edges to
/// vertical edges (the quarter turns and diagonal mirrors of a square grid
/// swap orientations), so the orbits have at most four edges. Each orbit is
/// sorted, so its first element is the smallest `(col, row)`.
pub fn vertical_edge_classes(m: usize, n: usize) -> Vec<Vec<(usize, usize)>> {
    let mut classes = Vec::new();
    if n < 2 {
        return classes;
    }
    for row in 0..n - 1 {
        for col in 0..m {
            let mut orbit = vec![(col, row), (m - 1 - col, row), (col, n - 2 - row), (m - 1 - col, n - 2 - row)];
            orbit.sort_unstable();
            orbit.dedup();
            if orbit[0] == (col, row) {
                classes.push(orbit);
            }
        }
    }
    classes
}

fn check(m: usize, n: usize) -> Result<Grid> {
    let g = Grid { m, n };
    if m == 0 || n < 2 {
        return Err(Error::InvalidParameter(format!("a {m}x{n} grid has no vertical edges")));
    }
    if !g.num_vertices().is_multiple_of(2) {
        return Err(Error::NotDivisible { k: 2, n: g.num_vertices() });
    }
    Ok(g)
}

/// Estimates for the vertical edges at `edges` (as `(col, row)`), each from
/// its own `trials` samples.
pub fn balanced_edge_estimates(config: &HeatmapConfig, edges: &[(usize, usize)]) -> Result<Vec<Estimate>> {
    let grid = check(config.m, config.n)?;
    if config.trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let g = build_grid(config.m, config.n)?;
    let half = grid.num_vertices() / 2;
    let proto = EdgeSplitSampler::new(&g)?;
    edges
        .iter()
        .map(|&(col, row)| {
            if col >= config.m || row + 1 >= config.n {
                return Err(Error::InvalidParameter(format!("no vertical edge at ({col}, {row})")));
            }
            let e = grid.vertical_edge(col, row);
            let hits = run_trials(
                config.trials,
                config.workers,
                || proto.clone(),
                || 0u64,
                |s, t, hits| {
                    let mut rng = RngStream::new(config.seed, t).derive(e as u64);
                    if s.sample(e, &mut rng)?.below == Some(half) {
                        *hits += 1;
                    }
                    Ok(())
                },
            )?;
            Ok(Estimate::new(hits, config.trials))
        })
        .collect()
}

pub fn run_heatmap(config: &HeatmapConfig) -> Result<Heatmap> {
    check(config.m, config.n)?;
    let orbits = vertical_edge_classes(config.m, config.n);
    let reps: Vec<(usize, usize)> = orbits.iter().map(|o| o[0]).collect();
    let estimates = balanced_edge_estimates(config, &reps)?;
    let mut cells = Vec::with_capacity(config.m * (config.n - 1));
    let mut class_of = vec![0usize; config.m * (config.n - 1)];
    for (c, orbit) in orbits.iter().enumerate() {
        for &(col, row) in orbit {
            class_of[row * config.m + col] = c;
        }
    }
    for row in 0..config.n - 1 {
        for col in 0..config.m {
            let class = class_of[row * config.m + col];
            cells.push(HeatmapCell { col, row, class, estimate: estimates[class] });
        }
    }
    Ok(Heatmap { m: config.m, n: config.n, classes: reps, cells })
}

impl Heatmap {
    pub fn cell(&self, col: usize, row: usize) -> &HeatmapCell {
        &self.cells[row * self.m + col]
    }

    pub fn write_csv(&self, mut out: impl Write) -> Result<()> {
        let io = |e: std::io::Error| Error::InvalidParameter(e.to_string());
        writeln!(out, "col,row,orientation,successes,trials,ci_lo,ci_hi").map_err(io)?;
        for c in &self.cells {
            let e = &c.estimate;
            writeln!(out, "{},{},v,{},{},{:.6e},{:.6e}", c.col, c.row, e.successes, e.trials, e.ci_lo, e.ci_hi)
                .map_err(io)?;
        }
        Ok(())
    }

    /// One rectangle per vertical edge, shaded by frequency relative to the
    /// largest one. Row 0 is drawn at the bottom.
    pub fn to_svg(&self) -> String {
        const PX: usize = 24;
        let rows = self.n - 1;
        let max = self.cells.iter().map(|c| c.estimate.frequency).fold(0.0, f64::max);
        let (w, h) = (self.m * PX, rows * PX);
        let mut s = String::new();
        let _ =
            writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#);
        for c in &self.cells {
            let t = if max > 0.0 { c.estimate.frequency / max } else { 0.0 };
            let (r, g, b) = shade(t);
            let _ = writeln!(
                s,
                r#"<rect x="{}" y="{}" width="{PX}" height="{PX}" fill="rgb({r},{g},{b})"><title>({}, {}): {}/{}</title></rect>"#,
                c.col * PX,
                (rows - 1 - c.row) * PX,
                c.col,
                c.row,
                c.estimate.successes,
                c.estimate.trials
            );
        }
        s.push_str("</svg>\n");
        s
    }
}

/// White to dark red.
fn shade(t: f64) -> (u8, u8, u8) {
    let t = t.clamp(0.0, 1.0);
    let lerp = |a: f64, b: f64| (a + (b - a) * t).round() as u8;
    (lerp(255.0, 150.0), lerp(255.0, 0.0), lerp(255.0, 0.0))
}
