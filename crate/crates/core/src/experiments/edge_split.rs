//! Whether a fixed edge of a uniform spanning tree splits it, and how.
//!
//! Only the first two walks of Wilson's algorithm on the dual are needed:
//! start them at the two faces of the edge. If neither walk crosses the edge,
//! the edge is in the primal tree, and the dual edges the walks laid down
//! separate the primal graph into exactly the two components of `T - e`.

use crate::dual::{compute_dual, DualGraph};
use crate::error::{Error, Result};
use crate::experiments::stats::{run_trials, Estimate};
use crate::graph::Graph;
use crate::planar::{build_grid, PlanarEmbedding};
use crate::rng::RngStream;
use crate::splitting::find_balanced_split;
use crate::walks::{DualWilson, WilsonState};

/// Outcome for one sampled tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeSample {
    /// Order of the component holding the edge's first endpoint after the
    /// edge is removed; `None` when the edge is not in the tree.
    pub below: Option<usize>,
    pub steps: u64,
}

/// Reusable buffers for sampling the split an edge induces.
#[derive(Debug, Clone)]
pub struct EdgeSplitSampler {
    primal: Graph,
    dual: DualGraph,
    state: WilsonState,
    seen: Vec<bool>,
    stack: Vec<usize>,
}

impl EdgeSplitSampler {
    pub fn new(g: &PlanarEmbedding) -> Result<Self> {
        let dual = compute_dual(g, false)?;
        let state = WilsonState::new(dual.graph());
        Ok(EdgeSplitSampler {
            primal: g.graph().clone(),
            state,
            seen: vec![false; g.num_vertices()],
            stack: Vec::new(),
            dual,
        })
    }

    pub fn num_vertices(&self) -> usize {
        self.primal.num_vertices()
    }

    pub fn sample(&mut self, edge: usize, rng: &mut RngStream) -> Result<EdgeSample> {
        let dg = self.dual.graph();
        if edge >= dg.num_edges() {
            return Err(Error::InvalidParameter(format!("edge {edge} out of range")));
        }
        let (a, b) = dg.endpoints(edge);
        self.state.reset(self.dual.root());
        let mut steps = self.state.walk_from(dg, a, rng)?.1;
        steps += self.state.walk_from(dg, b, rng)?.1;
        let cut = self.state.edge_flags();
        if cut[edge] {
            return Ok(EdgeSample { below: None, steps });
        }
        let (u, _) = self.dual.primal_endpoints(edge);
        self.seen.fill(false);
        self.seen[u] = true;
        self.stack.clear();
        self.stack.push(u);
        let mut size = 0;
        while let Some(x) = self.stack.pop() {
            size += 1;
            for inc in self.primal.neighbors(x) {
                let (y, e) = (inc.vertex as usize, inc.edge as usize);
                if e != edge && !cut[e] && !self.seen[y] {
                    self.seen[y] = true;
                    self.stack.push(y);
                }
            }
        }
        Ok(EdgeSample { below: Some(size), steps })
    }
}

/// Frequency with which a uniform spanning tree of the `m x n` grid is
/// `k`-splittable.
pub fn splittability(m: usize, n: usize, k: usize, trials: u64, seed: u64, workers: usize) -> Result<Estimate> {
    let g = build_grid(m, n)?;
    if k == 0 || g.num_vertices() % k != 0 {
        return Err(Error::NotDivisible { k, n: g.num_vertices() });
    }
    let dual = compute_dual(&g, false)?;
    let hits = run_trials(
        trials,
        workers,
        || DualWilson::new(&dual),
        || 0u64,
        |w, t, hits| {
            let sample = w.sample(&[], &mut RngStream::new(seed, t))?;
            if find_balanced_split(&sample.tree, k)?.is_some() {
                *hits += 1;
            }
            Ok(())
        },
    )?;
    Ok(Estimate::new(hits, trials))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::splitting::component_sizes;
    use crate::walks::wilson_on_dual;

    #[test]
    fn matches_full_trees_in_distribution() {
        // 2x3 grid, middle vertical edge: compare the below-size law against
        // full Wilson samples.
        let g = build_grid(3, 2).unwrap();
        let e = g.grid().unwrap().vertical_edge(1, 0);
        let mut sampler = EdgeSplitSampler::new(&g).unwrap();
        let trials = 60_000u64;
        let mut fast = [0u64; 7];
        let mut full = [0u64; 7];
        for t in 0..trials {
            let s = sampler.sample(e, &mut RngStream::new(1, t)).unwrap();
            fast[s.below.unwrap_or(0)] += 1;
            let tree = wilson_on_dual(&g, &[], &mut RngStream::new(2, t)).unwrap().tree;
            if tree.contains_edge(e) {
                let (u, _) = g.graph().endpoints(e);
                let in_u = side_of(&tree, e, u);
                assert!(component_sizes(&tree, &[e]).unwrap().contains(&in_u));
                full[in_u] += 1;
            } else {
                full[0] += 1;
            }
        }
        for s in 0..7 {
            let (p, q) = (fast[s] as f64 / trials as f64, full[s] as f64 / trials as f64);
            assert!((p - q).abs() < 0.015, "size {s}: {p} vs {q}");
        }
    }

    fn side_of(tree: &crate::tree::SpanningTree, e: usize, u: usize) -> usize {
        let n = tree.num_vertices();
        let mut adj = vec![Vec::new(); n];
        for te in tree.edges() {
            if te.id != e {
                adj[te.u].push(te.v);
                adj[te.v].push(te.u);
            }
        }
        let mut seen = vec![false; n];
        let mut stack = vec![u];
        seen[u] = true;
        let mut size = 0;
        while let Some(x) = stack.pop() {
            size += 1;
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        size
    }

    #[test]
    fn two_by_two_is_split_by_any_tree_edge() {
        let g = build_grid(2, 2).unwrap();
        let mut sampler = EdgeSplitSampler::new(&g).unwrap();
        let mut rng = RngStream::new(5, 0);
        for e in 0..4 {
            for _ in 0..50 {
                if let Some(b) = sampler.sample(e, &mut rng).unwrap().below {
                    assert!(b == 1 || b == 3 || b == 2);
                }
            }
        }
        let est = splittability(2, 2, 2, 2000, 3, 1).unwrap();
        // Each of the 4 trees is a path and splits evenly at its middle edge.
        assert_eq!(est.successes, 2000);
    }
}
