use crate::error::{Error, Result};
use crate::graph::{DisjointSets, Graph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TreeEdge {
    pub id: usize,
    pub u: usize,
    pub v: usize,
}

/// A spanning tree over vertices `0..num_vertices`, stored as host edges
/// sorted by id. The endpoints travel with the ids so tree algorithms do not
/// need the host graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SpanningTree {
    num_vertices: usize,
    edges: Vec<TreeEdge>,
}

impl SpanningTree {
    /// Validates that `edge_ids` span `host` without cycles.
    pub fn from_host_edges(host: &Graph, edge_ids: impl IntoIterator<Item = usize>) -> Result<Self> {
        let edges = edge_ids
            .into_iter()
            .map(|id| {
                if id >= host.num_edges() {
                    return Err(Error::NotSpanningTree(format!("edge {id} is not in the host graph")));
                }
                let (u, v) = host.endpoints(id);
                Ok(TreeEdge { id, u, v })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_edges(host.num_vertices(), edges)
    }

    pub fn from_edges(num_vertices: usize, mut edges: Vec<TreeEdge>) -> Result<Self> {
        edges.sort();
        if edges.windows(2).any(|w| w[0].id == w[1].id) {
            return Err(Error::NotSpanningTree("repeated edge".into()));
        }
        if num_vertices == 0 || edges.len() != num_vertices - 1 {
            return Err(Error::NotSpanningTree(format!("{} edges for {num_vertices} vertices", edges.len())));
        }
        let mut ds = DisjointSets::new(num_vertices);
        for e in &edges {
            if e.u >= num_vertices || e.v >= num_vertices {
                return Err(Error::NotSpanningTree(format!("edge {} leaves the vertex range", e.id)));
            }
            if !ds.union(e.u, e.v) {
                return Err(Error::NotSpanningTree(format!("edge {} closes a cycle", e.id)));
            }
        }
        Ok(SpanningTree { num_vertices, edges })
    }

    /// Skips validation; callers guarantee a spanning tree sorted by id.
    pub(crate) fn from_sorted_unchecked(num_vertices: usize, edges: Vec<TreeEdge>) -> Self {
        debug_assert!(edges.windows(2).all(|w| w[0].id < w[1].id));
        debug_assert_eq!(edges.len() + 1, num_vertices);
        SpanningTree { num_vertices, edges }
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn edges(&self) -> &[TreeEdge] {
        &self.edges
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = usize> + '_ {
        self.edges.iter().map(|e| e.id)
    }

    pub fn contains_edge(&self, id: usize) -> bool {
        self.edges.binary_search_by_key(&id, |e| e.id).is_ok()
    }

    pub fn rooted(&self, root: usize) -> RootedTree {
        RootedTree::new(self, root)
    }
}

/// Parent pointers and a preorder for a spanning tree rooted at `root`.
#[derive(Debug, Clone)]
pub struct RootedTree {
    pub root: usize,
    /// `usize::MAX` at the root.
    pub parent: Vec<usize>,
    /// Index into `SpanningTree::edges` of the edge to the parent.
    pub parent_edge: Vec<usize>,
    /// Vertices in preorder; every parent precedes its children.
    pub order: Vec<usize>,
    pub children: Vec<Vec<usize>>,
}

impl RootedTree {
    fn new(tree: &SpanningTree, root: usize) -> Self {
        let n = tree.num_vertices;
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
        for (slot, e) in tree.edges.iter().enumerate() {
            adj[e.u].push((e.v, slot));
            adj[e.v].push((e.u, slot));
        }
        let mut parent = vec![usize::MAX; n];
        let mut parent_edge = vec![usize::MAX; n];
        let mut children = vec![Vec::new(); n];
        let mut order = Vec::with_capacity(n);
        let mut seen = vec![false; n];
        let mut stack = vec![root];
        seen[root] = true;
        while let Some(u) = stack.pop() {
            order.push(u);
            for &(w, slot) in adj[u].iter().rev() {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = u;
                    parent_edge[w] = slot;
                    children[u].push(w);
                    stack.push(w);
                }
            }
        }
        RootedTree { root, parent, parent_edge, order, children }
    }

    /// Subtree sizes indexed by vertex.
    pub fn subtree_sizes(&self) -> Vec<usize> {
        let mut size = vec![1usize; self.parent.len()];
        for &v in self.order.iter().rev() {
            let p = self.parent[v];
            if p != usize::MAX {
                size[p] += size[v];
            }
        }
        size
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Graph {
        Graph::new(n, (0..n - 1).map(|i| (i, i + 1)).collect()).unwrap()
    }

    #[test]
    fn validates_spanning_trees() {
        let tri = Graph::new(3, vec![(0, 1), (1, 2), (2, 0)]).unwrap();
        assert!(SpanningTree::from_host_edges(&tri, [0, 1]).is_ok());
        assert!(SpanningTree::from_host_edges(&tri, [0]).is_err());
        let multi = Graph::new(2, vec![(0, 1), (0, 1)]).unwrap();
        assert!(SpanningTree::from_host_edges(&multi, [0, 1]).is_err());
        assert!(SpanningTree::from_host_edges(&tri, [0, 7]).is_err());
    }

    #[test]
    fn rooted_sizes_on_a_path() {
        let t = SpanningTree::from_host_edges(&path(5), 0..4).unwrap();
        let r = t.rooted(0);
        assert_eq!(r.subtree_sizes(), vec![5, 4, 3, 2, 1]);
        assert_eq!(r.order[0], 0);
        assert!(t.contains_edge(3) && !t.contains_edge(4));
    }
}
