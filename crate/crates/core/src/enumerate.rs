//! Exhaustive enumeration of spanning trees and k-forests, used as a test
//! oracle on small graphs.

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Largest edge count the oracle accepts.
pub const ENUMERATION_EDGE_CAP: usize = 25;

/// Every spanning tree of `g`, each as a sorted list of edge ids.
pub fn enumerate_spanning_trees(g: &Graph) -> Result<Vec<Vec<usize>>> {
    enumerate_k_forests(g, 1)
}

/// Every spanning forest of `g` with exactly `k` components, each as a sorted
/// list of edge ids, in lexicographic order.
pub fn enumerate_k_forests(g: &Graph, k: usize) -> Result<Vec<Vec<usize>>> {
    if g.num_edges() > ENUMERATION_EDGE_CAP {
        return Err(Error::TooLargeToEnumerate { edges: g.num_edges(), cap: ENUMERATION_EDGE_CAP });
    }
    let n = g.num_vertices();
    if k == 0 || k > n {
        return Ok(Vec::new());
    }
    let mut search = Search { g, target: n - k, uf: RollbackUnionFind::new(n), chosen: Vec::new(), out: Vec::new() };
    search.run(0);
    Ok(search.out)
}

struct Search<'a> {
    g: &'a Graph,
    target: usize,
    uf: RollbackUnionFind,
    chosen: Vec<usize>,
    out: Vec<Vec<usize>>,
}

impl Search<'_> {
    fn run(&mut self, next: usize) {
        if self.chosen.len() == self.target {
            self.out.push(self.chosen.clone());
            return;
        }
        let remaining = self.g.num_edges() - next;
        if remaining < self.target - self.chosen.len() {
            return;
        }
        let (u, v) = self.g.endpoints(next);
        if self.uf.union(u, v) {
            self.chosen.push(next);
            self.run(next + 1);
            self.chosen.pop();
            self.uf.rollback();
        }
        self.run(next + 1);
    }
}

struct RollbackUnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
    history: Vec<usize>,
}

impl RollbackUnionFind {
    fn new(n: usize) -> Self {
        RollbackUnionFind { parent: (0..n).collect(), size: vec![1; n], history: Vec::new() }
    }

    fn find(&self, mut x: usize) -> usize {
        while self.parent[x] != x {
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        self.history.push(rb);
        true
    }

    fn rollback(&mut self) {
        let rb = self.history.pop().expect("rollback without union");
        let ra = self.parent[rb];
        self.size[ra] -= self.size[rb];
        self.parent[rb] = rb;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planar::build_grid;

    fn binomial(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn cycle_two_forests() {
        let c4 = Graph::new(4, vec![(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let forests = enumerate_k_forests(&c4, 2).unwrap();
        assert_eq!(forests.len(), binomial(4, 2));
    }

    #[test]
    fn triangle_and_grid_trees() {
        let tri = Graph::new(3, vec![(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(enumerate_spanning_trees(&tri).unwrap().len(), 3);
        let g = build_grid(2, 3).unwrap();
        assert_eq!(enumerate_spanning_trees(g.graph()).unwrap().len(), 15);
    }

    #[test]
    fn brute_force_subsets_agree() {
        // Independent check: test every (n-k)-subset with a fresh union-find.
        let g = build_grid(3, 3).unwrap();
        let gr = g.graph();
        for k in 1..=3 {
            let fast = enumerate_k_forests(gr, k).unwrap();
            let mut slow = Vec::new();
            for mask in 0u32..(1 << gr.num_edges()) {
                if mask.count_ones() as usize != gr.num_vertices() - k {
                    continue;
                }
                let mut ds = crate::graph::DisjointSets::new(gr.num_vertices());
                let ids: Vec<usize> = (0..gr.num_edges()).filter(|e| mask >> e & 1 == 1).collect();
                if ids.iter().all(|&e| {
                    let (u, v) = gr.endpoints(e);
                    ds.union(u, v)
                }) {
                    slow.push(ids);
                }
            }
            slow.sort();
            assert_eq!(fast, slow, "k = {k}");
        }
    }

    #[test]
    fn size_guard() {
        let g = build_grid(4, 5).unwrap();
        assert!(matches!(enumerate_spanning_trees(g.graph()), Err(Error::TooLargeToEnumerate { .. })));
    }
}
