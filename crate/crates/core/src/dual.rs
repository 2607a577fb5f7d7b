//! Planar duals and the spanning tree bijection `T -> complement of T*`.

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::graph::Graph;
use crate::planar::PlanarEmbedding;
use crate::tree::{SpanningTree, TreeEdge};

/// Face-adjacency multigraph. Dual vertex `f` is primal face `f`; dual edge
/// `e` crosses primal edge `e`.
#[derive(Debug, Clone)]
pub struct DualGraph {
    graph: Graph,
    root: usize,
    positions: Vec<Option<Point>>,
    boundary: Option<Vec<Point>>,
    primal_edges: Vec<(usize, usize)>,
    num_primal_vertices: usize,
}

/// Dual of `g` rooted at its outer face.
///
/// With `wire_boundary`, the root stands for the whole boundary cycle, and the
/// cycle's geometry is kept so distance tests against the root measure
/// against the boundary rather than a single point.
pub fn compute_dual(g: &PlanarEmbedding, wire_boundary: bool) -> Result<DualGraph> {
    let mut edges = Vec::with_capacity(g.num_edges());
    for e in 0..g.num_edges() {
        let (a, b) = g.edge_faces(e);
        if a == b {
            return Err(Error::SameFaceOnBothSides { edge: e, face: a });
        }
        edges.push((a, b));
    }
    let graph = Graph::new(g.num_faces(), edges)?;
    let root = g.outer_face();
    let positions = (0..g.num_faces()).map(|f| (f != root).then(|| g.face_centroid(f))).collect();
    let boundary = wire_boundary.then(|| g.face_polygon(root));
    Ok(DualGraph {
        graph,
        root,
        positions,
        boundary,
        primal_edges: g.graph().edges().to_vec(),
        num_primal_vertices: g.num_vertices(),
    })
}

impl DualGraph {
    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn root(&self) -> usize {
        self.root
    }

    /// Location of a dual vertex; `None` for the root.
    pub fn position(&self, v: usize) -> Option<Point> {
        self.positions[v]
    }

    pub fn is_wired(&self) -> bool {
        self.boundary.is_some()
    }

    /// Geometry of the wired boundary cycle identified into the root.
    pub fn boundary(&self) -> Option<&[Point]> {
        self.boundary.as_deref()
    }

    pub fn set_boundary(&mut self, cycle: Vec<Point>) {
        self.boundary = Some(cycle);
    }

    pub fn num_primal_vertices(&self) -> usize {
        self.num_primal_vertices
    }

    pub fn primal_endpoints(&self, e: usize) -> (usize, usize) {
        self.primal_edges[e]
    }

    /// `T -> T*`: the dual edges of primal edges not in `t`.
    pub fn dual_tree(&self, t: &SpanningTree) -> Result<SpanningTree> {
        if t.num_vertices() != self.num_primal_vertices {
            return Err(Error::NotSpanningTree("tree does not span the primal graph".into()));
        }
        let mut in_tree = vec![false; self.primal_edges.len()];
        for id in t.edge_ids() {
            in_tree[id] = true;
        }
        let edges = (0..self.primal_edges.len())
            .filter(|&e| !in_tree[e])
            .map(|id| {
                let (u, v) = self.graph.endpoints(id);
                TreeEdge { id, u, v }
            })
            .collect();
        SpanningTree::from_edges(self.graph.num_vertices(), edges)
    }

    /// `T* -> T`, the inverse of [`DualGraph::dual_tree`].
    pub fn primal_tree(&self, t: &SpanningTree) -> Result<SpanningTree> {
        if t.num_vertices() != self.graph.num_vertices() {
            return Err(Error::NotSpanningTree("tree does not span the dual graph".into()));
        }
        let mut in_tree = vec![false; self.primal_edges.len()];
        for id in t.edge_ids() {
            in_tree[id] = true;
        }
        SpanningTree::from_edges(self.num_primal_vertices, self.complement_edges(&in_tree))
    }

    /// Primal tree from membership flags of a dual spanning tree, unchecked.
    pub(crate) fn primal_tree_from_flags(&self, dual_in_tree: &[bool]) -> SpanningTree {
        SpanningTree::from_sorted_unchecked(self.num_primal_vertices, self.complement_edges(dual_in_tree))
    }

    fn complement_edges(&self, in_tree: &[bool]) -> Vec<TreeEdge> {
        (0..self.primal_edges.len())
            .filter(|&e| !in_tree[e])
            .map(|id| {
                let (u, v) = self.primal_edges[id];
                TreeEdge { id, u, v }
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planar::build_grid;

    #[test]
    fn two_by_two_dual_is_a_fourfold_edge() {
        let g = build_grid(2, 2).unwrap();
        let d = compute_dual(&g, false).unwrap();
        assert_eq!(d.graph().num_vertices(), 2);
        assert_eq!(d.graph().num_edges(), 4);
        let r = d.root();
        assert!(d.graph().edges().iter().all(|&(a, b)| a != b && (a == r || b == r)));
        assert!(d.position(r).is_none());
    }

    #[test]
    fn three_by_three_dual_has_five_vertices() {
        let g = build_grid(3, 3).unwrap();
        let d = compute_dual(&g, true).unwrap();
        assert_eq!(d.graph().num_vertices(), 5);
        assert_eq!(d.graph().num_edges(), g.num_edges());
        assert_eq!(d.boundary().unwrap().len(), 8);
    }

    #[test]
    fn path_violates_same_face_hypothesis() {
        let g = build_grid(1, 5).unwrap();
        assert!(matches!(compute_dual(&g, false), Err(Error::SameFaceOnBothSides { .. })));
    }

    #[test]
    fn three_of_four_cycle_edges() {
        let g = build_grid(2, 2).unwrap();
        let d = compute_dual(&g, false).unwrap();
        let t = SpanningTree::from_host_edges(g.graph(), [0, 1, 2]).unwrap();
        let ts = d.dual_tree(&t).unwrap();
        assert_eq!(ts.edge_ids().collect::<Vec<_>>(), vec![3]);
        assert_eq!(d.primal_tree(&ts).unwrap(), t);
    }
}
