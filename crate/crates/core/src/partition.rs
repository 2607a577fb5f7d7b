use num_bigint::BigUint;

use crate::count::count_spanning_trees;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// A partition of a graph's vertices into `k` connected classes
/// ("districts"). Classes are kept sorted internally and ordered by their
/// smallest vertex, so equal partitions compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
}

impl Partition {
    pub fn new(g: &Graph, classes: Vec<Vec<usize>>) -> Result<Self> {
        let n = g.num_vertices();
        let mut class_of = vec![usize::MAX; n];
        let mut classes: Vec<Vec<usize>> = classes
            .into_iter()
            .map(|mut c| {
                c.sort_unstable();
                c
            })
            .collect();
        if classes.iter().any(|c| c.is_empty()) {
            return Err(Error::InvalidPartition("empty class".into()));
        }
        classes.sort();
        for (i, class) in classes.iter().enumerate() {
            for &v in class {
                if v >= n {
                    return Err(Error::InvalidPartition(format!("vertex {v} out of range")));
                }
                if class_of[v] != usize::MAX {
                    return Err(Error::InvalidPartition(format!("vertex {v} in two classes")));
                }
                class_of[v] = i;
            }
        }
        if let Some(v) = class_of.iter().position(|&c| c == usize::MAX) {
            return Err(Error::InvalidPartition(format!("vertex {v} is not covered")));
        }
        let p = Partition { classes, class_of };
        for i in 0..p.classes.len() {
            if !p.class_subgraph(g, i).0.is_connected() {
                return Err(Error::InvalidPartition(format!("class {i} is disconnected")));
            }
        }
        Ok(p)
    }

    /// Builds a partition from a per-vertex label in `0..k`.
    pub fn from_labels(g: &Graph, labels: &[usize]) -> Result<Self> {
        let k = labels.iter().copied().max().map_or(0, |m| m + 1);
        let mut classes = vec![Vec::new(); k];
        for (v, &l) in labels.iter().enumerate() {
            classes[l].push(v);
        }
        Partition::new(g, classes)
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_of(&self, v: usize) -> usize {
        self.class_of[v]
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        self.classes.iter().map(Vec::len).collect()
    }

    pub fn is_balanced(&self) -> bool {
        self.classes.windows(2).all(|w| w[0].len() == w[1].len())
    }

    fn class_subgraph(&self, g: &Graph, i: usize) -> (Graph, Vec<usize>) {
        g.induced(&self.classes[i])
    }

    /// `sp(P_i)` for every class.
    pub fn class_tree_counts(&self, g: &Graph) -> Vec<BigUint> {
        (0..self.classes.len()).map(|i| count_spanning_trees(&self.class_subgraph(g, i).0)).collect()
    }

    /// `prod_i sp(P_i)`, the unnormalized spanning tree weight.
    pub fn tree_weight(&self, g: &Graph) -> BigUint {
        self.class_tree_counts(g).into_iter().product()
    }

    /// Edges of `g` whose endpoints lie in different classes.
    pub fn crossing_edges(&self, g: &Graph) -> Vec<usize> {
        (0..g.num_edges())
            .filter(|&e| {
                let (u, v) = g.endpoints(e);
                self.class_of[u] != self.class_of[v]
            })
            .collect()
    }
}

/// `G/P`: one vertex per class, one edge per crossing primal edge.
#[derive(Debug, Clone)]
pub struct Contraction {
    pub graph: Graph,
    /// Primal edge id behind each contraction edge.
    pub edge_origin: Vec<usize>,
}

/// Contracts every class of `p` to a vertex, keeping crossing edges with
/// their multiplicity and dropping edges inside a class.
pub fn contract_partition(g: &Graph, p: &Partition) -> Result<Contraction> {
    if p.class_of.len() != g.num_vertices() {
        return Err(Error::InvalidPartition("partition is for a different graph".into()));
    }
    let edge_origin = p.crossing_edges(g);
    let edges = edge_origin
        .iter()
        .map(|&e| {
            let (u, v) = g.endpoints(e);
            (p.class_of[u], p.class_of[v])
        })
        .collect();
    Ok(Contraction { graph: Graph::new(p.num_classes(), edges)?, edge_origin })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planar::build_grid;

    fn multiplicity(c: &Contraction, a: usize, b: usize) -> usize {
        c.graph.edges().iter().filter(|&&(x, y)| (x, y) == (a, b) || (x, y) == (b, a)).count()
    }

    #[test]
    fn two_by_two_splits() {
        let g = build_grid(2, 2).unwrap();
        let gr = g.graph();
        // ids: (0,0)=0 (1,0)=1 (0,1)=2 (1,1)=3
        for classes in [vec![vec![0, 1], vec![2, 3]], vec![vec![0, 2], vec![1, 3]]] {
            let p = Partition::new(gr, classes).unwrap();
            let c = contract_partition(gr, &p).unwrap();
            assert_eq!(c.graph.num_vertices(), 2);
            assert_eq!(multiplicity(&c, 0, 1), 2);
        }
    }

    #[test]
    fn three_columns() {
        let g = build_grid(3, 3).unwrap();
        let grid = g.grid().unwrap();
        let labels: Vec<usize> = (0..9).map(|v| grid.coords(v).0).collect();
        let p = Partition::from_labels(g.graph(), &labels).unwrap();
        let c = contract_partition(g.graph(), &p).unwrap();
        assert_eq!(multiplicity(&c, 0, 1), 3);
        assert_eq!(multiplicity(&c, 1, 2), 3);
        assert_eq!(multiplicity(&c, 0, 2), 0);
        assert_eq!(p.class_tree_counts(g.graph()), vec![BigUint::from(1u32); 3]);
    }

    #[test]
    fn rejects_bad_partitions() {
        let g = build_grid(2, 2).unwrap();
        let gr = g.graph();
        assert!(Partition::new(gr, vec![vec![0, 3], vec![1, 2]]).is_err());
        assert!(Partition::new(gr, vec![vec![0, 1], vec![2]]).is_err());
        assert!(Partition::new(gr, vec![vec![0, 1], vec![1, 2, 3]]).is_err());
    }
}
