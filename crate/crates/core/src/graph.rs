//! Undirected multigraphs with stable edge ids.
//!
//! Parallel edges are distinct and each one is its own entry in the adjacency
//! of both endpoints, so a uniform pick from `neighbors(v)` is a uniform pick
//! over incident edges counted with multiplicity. Self-loops are rejected.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One adjacency entry: the vertex on the other side and the edge id used.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Incidence {
    pub vertex: u32,
    pub edge: u32,
}

#[derive(Debug, Clone)]
pub struct Graph {
    num_vertices: usize,
    edges: Vec<(usize, usize)>,
    offsets: Vec<usize>,
    incidences: Vec<Incidence>,
}

impl Graph {
    pub fn new(num_vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        for (id, &(u, v)) in edges.iter().enumerate() {
            if u >= num_vertices || v >= num_vertices {
                return Err(Error::InvalidEmbedding(format!(
                    "edge {id} = ({u}, {v}) references a vertex outside 0..{num_vertices}"
                )));
            }
            if u == v {
                return Err(Error::InvalidEmbedding(format!("edge {id} is a self-loop at {u}")));
            }
        }
        let mut degree = vec![0usize; num_vertices + 1];
        for &(u, v) in &edges {
            degree[u] += 1;
            degree[v] += 1;
        }
        let mut offsets = Vec::with_capacity(num_vertices + 1);
        let mut acc = 0;
        for d in &degree[..num_vertices] {
            offsets.push(acc);
            acc += d;
        }
        offsets.push(acc);
        let mut fill = offsets.clone();
        let mut incidences = vec![Incidence { vertex: 0, edge: 0 }; acc];
        for (id, &(u, v)) in edges.iter().enumerate() {
            incidences[fill[u]] = Incidence { vertex: v as u32, edge: id as u32 };
            fill[u] += 1;
            incidences[fill[v]] = Incidence { vertex: u as u32, edge: id as u32 };
            fill[v] += 1;
        }
        Ok(Graph { num_vertices, edges, offsets, incidences })
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn endpoints(&self, edge: usize) -> (usize, usize) {
        self.edges[edge]
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[Incidence] {
        &self.incidences[self.offsets[v]..self.offsets[v + 1]]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn is_connected(&self) -> bool {
        if self.num_vertices == 0 {
            return true;
        }
        self.component_labels().1 == 1
    }

    /// Labels every vertex with a component index; returns (labels, count).
    pub fn component_labels(&self) -> (Vec<usize>, usize) {
        let mut label = vec![usize::MAX; self.num_vertices];
        let mut count = 0;
        let mut stack = Vec::new();
        for s in 0..self.num_vertices {
            if label[s] != usize::MAX {
                continue;
            }
            label[s] = count;
            stack.push(s);
            while let Some(u) = stack.pop() {
                for inc in self.neighbors(u) {
                    let w = inc.vertex as usize;
                    if label[w] == usize::MAX {
                        label[w] = count;
                        stack.push(w);
                    }
                }
            }
            count += 1;
        }
        (label, count)
    }

    /// Subgraph induced by `vertices`, relabelled in the order given.
    /// Returns the subgraph and, for each of its edges, the original edge id.
    pub fn induced(&self, vertices: &[usize]) -> (Graph, Vec<usize>) {
        let mut local = vec![usize::MAX; self.num_vertices];
        for (i, &v) in vertices.iter().enumerate() {
            local[v] = i;
        }
        let mut edges = Vec::new();
        let mut origin = Vec::new();
        for (id, &(u, v)) in self.edges.iter().enumerate() {
            if local[u] != usize::MAX && local[v] != usize::MAX {
                edges.push((local[u], local[v]));
                origin.push(id);
            }
        }
        let g = Graph::new(vertices.len(), edges).expect("induced subgraph of a valid graph");
        (g, origin)
    }
}

/// Plain-data form used for JSON input and output.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct GraphJson {
    pub vertices: Vec<VertexJson>,
    pub edges: Vec<EdgeJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct VertexJson {
    pub id: usize,
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct EdgeJson {
    pub id: usize,
    pub u: usize,
    pub v: usize,
}

/// Union-find with path halving and union by size.
#[derive(Debug, Clone)]
pub struct DisjointSets {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl DisjointSets {
    pub fn new(n: usize) -> Self {
        DisjointSets { parent: (0..n).collect(), size: vec![1; n] }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false if `a` and `b` were already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        true
    }

    pub fn set_size(&mut self, x: usize) -> usize {
        let r = self.find(x);
        self.size[r]
    }
}
