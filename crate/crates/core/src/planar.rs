//! Plane embeddings given by a rotation system, and grid graphs.
//!
//! Darts: edge `e` = `(u, v)` has dart `2e` from `u` to `v` and dart `2e + 1`
//! from `v` to `u`. Each dart is assigned the face on its left.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::{signed_area, Point};
use crate::graph::{EdgeJson, Graph, GraphJson, VertexJson};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    Horizontal,
    Vertical,
}

impl Orientation {
    pub fn as_str(self) -> &'static str {
        match self {
            Orientation::Horizontal => "h",
            Orientation::Vertical => "v",
        }
    }
}

/// Index arithmetic for the `m x n` grid: `m` columns along x, `n` rows along
/// y, vertex `(i, j)` at coordinates `(i, j)` with id `j * m + i`.
/// Horizontal edges come first, then vertical ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Grid {
    pub m: usize,
    pub n: usize,
}

impl Grid {
    pub fn num_vertices(&self) -> usize {
        self.m * self.n
    }

    pub fn num_edges(&self) -> usize {
        self.num_horizontal() + self.m * (self.n - 1)
    }

    fn num_horizontal(&self) -> usize {
        (self.m - 1) * self.n
    }

    pub fn vertex(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < self.m && j < self.n);
        j * self.m + i
    }

    pub fn coords(&self, v: usize) -> (usize, usize) {
        (v % self.m, v / self.m)
    }

    /// Edge from `(i, j)` to `(i + 1, j)`.
    pub fn horizontal_edge(&self, i: usize, j: usize) -> usize {
        debug_assert!(i + 1 < self.m && j < self.n);
        j * (self.m - 1) + i
    }

    /// Edge from `(i, j)` to `(i, j + 1)`.
    pub fn vertical_edge(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < self.m && j + 1 < self.n);
        self.num_horizontal() + j * self.m + i
    }

    pub fn edge(&self, col: usize, row: usize, orientation: Orientation) -> usize {
        match orientation {
            Orientation::Horizontal => self.horizontal_edge(col, row),
            Orientation::Vertical => self.vertical_edge(col, row),
        }
    }

    /// `(col, row, orientation)` of the edge's lower-left endpoint.
    pub fn edge_position(&self, e: usize) -> (usize, usize, Orientation) {
        let h = self.num_horizontal();
        if e < h {
            (e % (self.m - 1), e / (self.m - 1), Orientation::Horizontal)
        } else {
            let r = e - h;
            (r % self.m, r / self.m, Orientation::Vertical)
        }
    }

    fn edge_list(&self) -> Vec<(usize, usize)> {
        let mut edges = Vec::with_capacity(self.num_edges());
        for j in 0..self.n {
            for i in 0..self.m - 1 {
                edges.push((self.vertex(i, j), self.vertex(i + 1, j)));
            }
        }
        for j in 0..self.n - 1 {
            for i in 0..self.m {
                edges.push((self.vertex(i, j), self.vertex(i, j + 1)));
            }
        }
        edges
    }
}

#[derive(Debug, Clone)]
pub struct PlanarEmbedding {
    graph: Graph,
    positions: Vec<Point>,
    /// Darts leaving each vertex in counter-clockwise order.
    rotation: Vec<Vec<usize>>,
    rotation_slot: Vec<usize>,
    dart_face: Vec<usize>,
    faces: Vec<Vec<usize>>,
    outer_face: usize,
    grid: Option<Grid>,
}

#[inline]
pub fn reverse_dart(d: usize) -> usize {
    d ^ 1
}

#[inline]
pub fn dart_edge(d: usize) -> usize {
    d >> 1
}

impl PlanarEmbedding {
    /// Builds the embedding of a straight-line drawing: the rotation at each
    /// vertex is the angular order of its edges.
    pub fn from_drawing(positions: Vec<Point>, edges: Vec<(usize, usize)>) -> Result<Self> {
        if positions.is_empty() {
            return Err(Error::InvalidEmbedding("no vertices".into()));
        }
        let graph = Graph::new(positions.len(), edges)?;
        let mut rotation: Vec<Vec<usize>> = vec![Vec::new(); graph.num_vertices()];
        for (e, &(u, v)) in graph.edges().iter().enumerate() {
            rotation[u].push(2 * e);
            rotation[v].push(2 * e + 1);
        }
        for (v, darts) in rotation.iter_mut().enumerate() {
            let p = positions[v];
            darts.sort_by(|&a, &b| {
                let angle = |d: usize| {
                    let (x, y) = graph.endpoints(dart_edge(d));
                    let q = positions[if d & 1 == 0 { y } else { x }];
                    let t = (q.y - p.y).atan2(q.x - p.x);
                    if t < 0.0 {
                        t + 2.0 * PI
                    } else {
                        t
                    }
                };
                angle(a).total_cmp(&angle(b)).then(a.cmp(&b))
            });
        }
        Self::from_rotation(graph, positions, rotation)
    }

    /// Builds the embedding from an explicit rotation system. Positions are
    /// used only to pick the outer face (the face of least signed area).
    pub fn from_rotation(graph: Graph, positions: Vec<Point>, rotation: Vec<Vec<usize>>) -> Result<Self> {
        if !graph.is_connected() {
            return Err(Error::Disconnected);
        }
        let num_darts = 2 * graph.num_edges();
        let mut rotation_slot = vec![usize::MAX; num_darts];
        for (v, darts) in rotation.iter().enumerate() {
            for (slot, &d) in darts.iter().enumerate() {
                if d >= num_darts || rotation_slot[d] != usize::MAX {
                    return Err(Error::InvalidEmbedding(format!("dart {d} misplaced in rotation")));
                }
                let (a, b) = graph.endpoints(dart_edge(d));
                if v != if d & 1 == 0 { a } else { b } {
                    return Err(Error::InvalidEmbedding(format!("dart {d} does not leave vertex {v}")));
                }
                rotation_slot[d] = slot;
            }
        }
        if rotation_slot.contains(&usize::MAX) {
            return Err(Error::InvalidEmbedding("rotation misses a dart".into()));
        }

        let mut emb = PlanarEmbedding {
            graph,
            positions,
            rotation,
            rotation_slot,
            dart_face: vec![usize::MAX; num_darts],
            faces: Vec::new(),
            outer_face: 0,
            grid: None,
        };
        for start in 0..num_darts {
            if emb.dart_face[start] != usize::MAX {
                continue;
            }
            let face = emb.faces.len();
            let mut cycle = Vec::new();
            let mut d = start;
            while emb.dart_face[d] == usize::MAX {
                emb.dart_face[d] = face;
                cycle.push(d);
                d = emb.next_in_face(d);
            }
            if d != start {
                return Err(Error::InvalidEmbedding("face traversal did not close".into()));
            }
            emb.faces.push(cycle);
        }
        if emb.faces.is_empty() {
            // A single vertex: one (outer) face with an empty boundary.
            emb.faces.push(Vec::new());
        }

        let (v, e, f) = (emb.num_vertices() as i64, emb.num_edges() as i64, emb.faces.len() as i64);
        if v - e + f != 2 {
            return Err(Error::InvalidEmbedding(format!(
                "Euler's formula fails: V - E + F = {v} - {e} + {f} != 2 (edges cross?)"
            )));
        }
        emb.outer_face = (0..emb.faces.len())
            .min_by(|&a, &b| signed_area(&emb.face_polygon(a)).total_cmp(&signed_area(&emb.face_polygon(b))))
            .unwrap_or(0);
        Ok(emb)
    }

    /// The next dart along the face on the left of `d`.
    fn next_in_face(&self, d: usize) -> usize {
        let back = reverse_dart(d);
        let v = self.dart_origin(back);
        let around = &self.rotation[v];
        let slot = self.rotation_slot[back];
        around[(slot + around.len() - 1) % around.len()]
    }

    pub fn from_json(json: &GraphJson) -> Result<Self> {
        let n = json.vertices.len();
        let mut positions = vec![None; n];
        for v in &json.vertices {
            if v.id >= n || positions[v.id].is_some() {
                return Err(Error::InvalidEmbedding(format!("vertex ids must be 0..{n}, got {}", v.id)));
            }
            positions[v.id] = Some(Point::new(v.x, v.y));
        }
        let m = json.edges.len();
        let mut edges = vec![None; m];
        for e in &json.edges {
            if e.id >= m || edges[e.id].is_some() {
                return Err(Error::InvalidEmbedding(format!("edge ids must be 0..{m}, got {}", e.id)));
            }
            edges[e.id] = Some((e.u, e.v));
        }
        Self::from_drawing(positions.into_iter().flatten().collect(), edges.into_iter().flatten().collect())
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            vertices: self.positions.iter().enumerate().map(|(id, p)| VertexJson { id, x: p.x, y: p.y }).collect(),
            edges: self.graph.edges().iter().enumerate().map(|(id, &(u, v))| EdgeJson { id, u, v }).collect(),
        }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn num_vertices(&self) -> usize {
        self.graph.num_vertices()
    }

    pub fn num_edges(&self) -> usize {
        self.graph.num_edges()
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn positions(&self) -> &[Point] {
        &self.positions
    }

    pub fn outer_face(&self) -> usize {
        self.outer_face
    }

    pub fn grid(&self) -> Option<Grid> {
        self.grid
    }

    pub fn rotation(&self, v: usize) -> &[usize] {
        &self.rotation[v]
    }

    pub fn face_darts(&self, f: usize) -> &[usize] {
        &self.faces[f]
    }

    pub fn dart_origin(&self, d: usize) -> usize {
        let (u, v) = self.graph.endpoints(dart_edge(d));
        if d & 1 == 0 {
            u
        } else {
            v
        }
    }

    pub fn dart_head(&self, d: usize) -> usize {
        self.dart_origin(reverse_dart(d))
    }

    /// The face on the left of dart `d`.
    pub fn left_face(&self, d: usize) -> usize {
        self.dart_face[d]
    }

    /// `(left face of dart 2e, left face of dart 2e + 1)`.
    pub fn edge_faces(&self, e: usize) -> (usize, usize) {
        (self.dart_face[2 * e], self.dart_face[2 * e + 1])
    }

    /// Boundary walk of a face as points (vertices may repeat).
    pub fn face_polygon(&self, f: usize) -> Vec<Point> {
        self.faces[f].iter().map(|&d| self.positions[self.dart_origin(d)]).collect()
    }

    pub fn face_centroid(&self, f: usize) -> Point {
        let ring = self.face_polygon(f);
        let k = ring.len().max(1) as f64;
        let (sx, sy) = ring.iter().fold((0.0, 0.0), |(x, y), p| (x + p.x, y + p.y));
        Point::new(sx / k, sy / k)
    }
}

/// The `m x n` grid graph with unit spacing.
pub fn build_grid(m: usize, n: usize) -> Result<PlanarEmbedding> {
    if m == 0 || n == 0 {
        return Err(Error::EmptyGrid { m, n });
    }
    let grid = Grid { m, n };
    let positions = (0..m * n).map(|v| {
        let (i, j) = grid.coords(v);
        Point::new(i as f64, j as f64)
    });
    let mut emb = PlanarEmbedding::from_drawing(positions.collect(), grid.edge_list())?;
    emb.grid = Some(grid);
    Ok(emb)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_counts() {
        let g = build_grid(2, 2).unwrap();
        assert_eq!((g.num_vertices(), g.num_edges(), g.num_faces()), (4, 4, 2));
        let g = build_grid(1, 5).unwrap();
        assert_eq!((g.num_vertices(), g.num_edges(), g.num_faces()), (5, 4, 1));
        let g = build_grid(10, 10).unwrap();
        assert_eq!((g.num_vertices(), g.num_edges(), g.num_faces()), (100, 180, 82));
        assert!(build_grid(0, 3).is_err());
        assert!(build_grid(3, 0).is_err());
    }

    #[test]
    fn grid_edge_count_formula() {
        for m in 1..6 {
            for n in 1..6 {
                let g = build_grid(m, n).unwrap();
                assert_eq!(g.num_edges(), m * (n - 1) + n * (m - 1));
                assert_eq!(g.num_vertices() as i64 - g.num_edges() as i64 + g.num_faces() as i64, 2);
            }
        }
    }

    #[test]
    fn grid_indexing_roundtrip() {
        let g = build_grid(4, 3).unwrap();
        let grid = g.grid().unwrap();
        for e in 0..g.num_edges() {
            let (c, r, o) = grid.edge_position(e);
            assert_eq!(grid.edge(c, r, o), e);
            let (u, v) = g.graph().endpoints(e);
            assert_eq!(grid.coords(u), (c, r));
            let expected = match o {
                Orientation::Horizontal => (c + 1, r),
                Orientation::Vertical => (c, r + 1),
            };
            assert_eq!(grid.coords(v), expected);
        }
    }

    #[test]
    fn outer_face_of_square_has_four_darts() {
        let g = build_grid(2, 2).unwrap();
        let outer = g.outer_face();
        assert_eq!(g.face_darts(outer).len(), 4);
        let inner = 1 - outer;
        let c = g.face_centroid(inner);
        assert!((c.x - 0.5).abs() < 1e-12 && (c.y - 0.5).abs() < 1e-12);
        for e in 0..4 {
            let (a, b) = g.edge_faces(e);
            assert_ne!(a, b);
        }
    }

    #[test]
    fn crossing_drawing_fails_euler() {
        // K4 drawn with crossing diagonals.
        let pos = vec![Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(1.0, 1.0), Point::new(0.0, 1.0)];
        let edges = vec![(0, 1), (1, 2), (2, 3), (3, 0), (0, 2), (1, 3)];
        assert!(PlanarEmbedding::from_drawing(pos, edges).is_err());
    }

    #[test]
    fn json_roundtrip() {
        let g = build_grid(3, 2).unwrap();
        let j = g.to_json();
        let text = serde_json::to_string(&j).unwrap();
        let back = PlanarEmbedding::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back.graph().edges(), g.graph().edges());
        assert_eq!(back.num_faces(), g.num_faces());
    }
}
