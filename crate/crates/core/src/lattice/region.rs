//! Lattice graphs clipped to the region bounded by a drawing.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dual::{compute_dual, DualGraph};
use crate::error::{Error, Result};
use crate::geometry::{curve_hausdorff, polygon_contains, Point};
use crate::graph::Graph;
use crate::lattice::drawing::PlaneGraphD;
use crate::planar::PlanarEmbedding;

/// Lattice site key: integer coordinates plus a sublattice tag.
type Site = (i64, i64, u8);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LatticeKind {
    Square,
    Triangular,
    Hexagonal,
}

impl LatticeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            LatticeKind::Square => "square",
            LatticeKind::Triangular => "triangular",
            LatticeKind::Hexagonal => "hexagonal",
        }
    }
}

impl fmt::Display for LatticeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LatticeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "square" => Ok(LatticeKind::Square),
            "triangular" => Ok(LatticeKind::Triangular),
            "hexagonal" => Ok(LatticeKind::Hexagonal),
            _ => Err(Error::InvalidParameter(format!("unknown lattice {s:?}"))),
        }
    }
}

/// The part of a lattice with spacing `1/n` inside a drawing's outer
/// boundary, with its dual wired along the boundary cycle.
#[derive(Debug, Clone)]
pub struct LatticeRegion {
    pub kind: LatticeKind,
    pub n: usize,
    pub delta: f64,
    /// The clipped primal graph.
    pub embedding: PlanarEmbedding,
    /// Dual rooted at the outer face; the root carries the boundary cycle.
    pub dual: DualGraph,
    /// Centers of the lattice faces just outside the region, in order.
    pub boundary_cycle: Vec<Point>,
    /// Hausdorff distance from the boundary cycle to the drawing's boundary.
    pub boundary_distance: f64,
}

/// Lattice points and edges covering a box, in row-major vertex order.
struct Patch {
    points: Vec<Point>,
    edges: Vec<(usize, usize)>,
}

fn patch(kind: LatticeKind, s: f64, lo: Point, hi: Point) -> Patch {
    const MARGIN: f64 = 3.0;
    let mut ids: HashMap<Site, usize> = HashMap::new();
    let mut points = Vec::new();
    let mut add = |key: Site, p: Point, points: &mut Vec<Point>| {
        ids.insert(key, points.len());
        points.push(p);
    };
    let (x0, x1) = (lo.x - MARGIN * s, hi.x + MARGIN * s);
    let (y0, y1) = (lo.y - MARGIN * s, hi.y + MARGIN * s);
    let mut links: Vec<(Site, Site)> = Vec::new();
    match kind {
        LatticeKind::Square => {
            let (ja, jb) = ((y0 / s).floor() as i64, (y1 / s).ceil() as i64);
            let (ia, ib) = ((x0 / s).floor() as i64, (x1 / s).ceil() as i64);
            for j in ja..=jb {
                for i in ia..=ib {
                    add((i, j, 0), Point::new((i as f64 + 0.5) * s, (j as f64 + 0.5) * s), &mut points);
                    links.push(((i, j, 0), (i + 1, j, 0)));
                    links.push(((i, j, 0), (i, j + 1, 0)));
                }
            }
        }
        LatticeKind::Triangular => {
            let h = s * 3f64.sqrt() / 2.0;
            let (ja, jb) = ((y0 / h).floor() as i64, (y1 / h).ceil() as i64);
            for j in ja..=jb {
                let shift = j as f64 / 2.0;
                let (ia, ib) = ((x0 / s - shift).floor() as i64, (x1 / s - shift).ceil() as i64);
                for i in ia..=ib {
                    add((i, j, 0), Point::new((i as f64 + shift) * s, j as f64 * h), &mut points);
                    links.push(((i, j, 0), (i + 1, j, 0)));
                    links.push(((i, j, 0), (i, j + 1, 0)));
                    links.push(((i, j, 0), (i - 1, j + 1, 0)));
                }
            }
        }
        LatticeKind::Hexagonal => {
            let w = s * 3f64.sqrt();
            let (ja, jb) = ((y0 / (1.5 * s)).floor() as i64, (y1 / (1.5 * s)).ceil() as i64);
            for j in ja..=jb {
                let shift = j as f64 / 2.0;
                let (ia, ib) = ((x0 / w - shift).floor() as i64, (x1 / w - shift).ceil() as i64);
                for i in ia..=ib {
                    let a = Point::new((i as f64 + shift) * w, 1.5 * s * j as f64);
                    add((i, j, 0), a, &mut points);
                    add((i, j, 1), Point::new(a.x, a.y + s), &mut points);
                    links.push(((i, j, 0), (i, j, 1)));
                    links.push(((i, j, 1), (i, j + 1, 0)));
                    links.push(((i, j, 1), (i - 1, j + 1, 0)));
                }
            }
        }
    }
    let edges = links.into_iter().filter_map(|(a, b)| Some((*ids.get(&a)?, *ids.get(&b)?))).collect();
    Patch { points, edges }
}

/// Bridges of a multigraph, by edge id.
fn bridges(g: &Graph) -> Vec<bool> {
    let n = g.num_vertices();
    let mut is_bridge = vec![false; g.num_edges()];
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut time = 0;
    for s in 0..n {
        if disc[s] != usize::MAX {
            continue;
        }
        // Frames: (vertex, edge used to enter it, next neighbor slot).
        let mut stack = vec![(s, usize::MAX, 0usize)];
        disc[s] = time;
        low[s] = time;
        time += 1;
        while let Some(&mut (v, via, ref mut slot)) = stack.last_mut() {
            let nb = g.neighbors(v);
            if *slot < nb.len() {
                let inc = nb[*slot];
                *slot += 1;
                let (w, e) = (inc.vertex as usize, inc.edge as usize);
                if e == via {
                    continue;
                }
                if disc[w] == usize::MAX {
                    disc[w] = time;
                    low[w] = time;
                    time += 1;
                    stack.push((w, e, 0));
                } else {
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                stack.pop();
                if let Some(&(p, _, _)) = stack.last() {
                    low[p] = low[p].min(low[v]);
                    if low[v] > disc[p] {
                        is_bridge[via] = true;
                    }
                }
            }
        }
    }
    is_bridge
}

/// Lattice vertices inside the drawing, restricted to the largest
/// 2-edge-connected piece so every edge has distinct faces on its sides.
fn clip(p: &Patch, outer: &[Point]) -> (Vec<usize>, Vec<(usize, usize)>) {
    let inside: Vec<usize> = (0..p.points.len()).filter(|&v| polygon_contains(outer, p.points[v])).collect();
    let mut local = vec![usize::MAX; p.points.len()];
    for (i, &v) in inside.iter().enumerate() {
        local[v] = i;
    }
    let edges: Vec<(usize, usize)> = p
        .edges
        .iter()
        .filter(|&&(a, b)| local[a] != usize::MAX && local[b] != usize::MAX)
        .map(|&(a, b)| (local[a], local[b]))
        .collect();
    let g = Graph::new(inside.len(), edges.clone()).expect("lattice has no loops");
    let bridge = bridges(&g);
    let kept: Vec<(usize, usize)> = (0..edges.len()).filter(|&e| !bridge[e]).map(|e| edges[e]).collect();
    let core = Graph::new(inside.len(), kept).unwrap();
    let (labels, count) = core.component_labels();
    let mut sizes = vec![0usize; count];
    for &l in &labels {
        sizes[l] += 1;
    }
    let Some(big) = (0..count).max_by_key(|&c| (sizes[c], std::cmp::Reverse(c))) else {
        return (Vec::new(), Vec::new());
    };
    let verts: Vec<usize> = (0..inside.len()).filter(|&v| labels[v] == big).collect();
    let mut renum = vec![usize::MAX; inside.len()];
    for (i, &v) in verts.iter().enumerate() {
        renum[v] = i;
    }
    let region_edges = core
        .edges()
        .iter()
        .filter(|&&(a, b)| labels[a] == big && labels[b] == big)
        .map(|&(a, b)| (renum[a], renum[b]))
        .collect();
    (verts.iter().map(|&v| inside[v]).collect(), region_edges)
}

/// Clips a lattice of spacing `1/n` to the region bounded by `d` and checks
/// that the dual boundary cycle is within `delta` of `d`'s outer boundary.
pub fn build_lattice_region(kind: LatticeKind, n: usize, d: &PlaneGraphD, delta: f64) -> Result<LatticeRegion> {
    if n == 0 || delta.is_nan() || delta <= 0.0 {
        return Err(Error::InvalidParameter("refinement and delta must be positive".into()));
    }
    let s = 1.0 / n as f64;
    let outer = d.outer_boundary();
    let (mut lo, mut hi) = (outer[0], outer[0]);
    for p in outer {
        lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
    }
    let patch = patch(kind, s, lo, hi);
    let (origin, edges) = clip(&patch, outer);
    if edges.len() < 3 {
        return Err(Error::NoBoundaryCycle { delta, achieved: f64::INFINITY });
    }
    let lattice = PlanarEmbedding::from_drawing(patch.points.clone(), patch.edges.clone())?;
    let positions: Vec<Point> = origin.iter().map(|&v| patch.points[v]).collect();
    let embedding = PlanarEmbedding::from_drawing(positions, edges)?;

    let boundary_cycle = boundary_cycle(&lattice, &embedding, &origin)?;
    let boundary_distance = curve_hausdorff(&boundary_cycle, true, outer, true, s / 8.0)?;
    if boundary_distance >= delta {
        return Err(Error::NoBoundaryCycle { delta, achieved: boundary_distance });
    }
    let mut dual = compute_dual(&embedding, true)?;
    dual.set_boundary(boundary_cycle.clone());
    Ok(LatticeRegion { kind, n, delta, embedding, dual, boundary_cycle, boundary_distance })
}

/// Centers of the lattice faces met while walking the region's outer face,
/// which form the dual cycle enclosing the region.
fn boundary_cycle(lattice: &PlanarEmbedding, region: &PlanarEmbedding, origin: &[usize]) -> Result<Vec<Point>> {
    let lattice_dart = |from: usize, to: usize| -> usize {
        let (a, b) = (origin[from], origin[to]);
        *lattice.rotation(a).iter().find(|&&d| lattice.dart_head(d) == b).expect("region edges are lattice edges")
    };
    let darts = region.face_darts(region.outer_face());
    let mut faces: Vec<usize> = Vec::new();
    for (t, &d_in) in darts.iter().enumerate() {
        let d_out = darts[(t + 1) % darts.len()];
        let b = region.dart_head(d_in);
        let back = lattice_dart(b, region.dart_origin(d_in));
        let out = lattice_dart(b, region.dart_head(d_out));
        let rot = lattice.rotation(origin[b]);
        let start = rot.iter().position(|&d| d == out).unwrap();
        let mut sector = Vec::new();
        let mut i = start;
        while rot[i] != back {
            sector.push(lattice.left_face(rot[i]));
            i = (i + 1) % rot.len();
        }
        faces.extend(sector.into_iter().rev());
    }
    faces.dedup();
    while faces.len() > 1 && faces.first() == faces.last() {
        faces.pop();
    }
    if faces.contains(&lattice.outer_face()) {
        return Err(Error::InvalidEmbedding("lattice patch is too small for the region".into()));
    }
    Ok(faces.into_iter().map(|f| lattice.face_centroid(f)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::drawing::vertical_strips;
    use crate::planar::build_grid;

    fn unit_square() -> PlaneGraphD {
        vertical_strips(1, 1.0, 1.0).unwrap()
    }

    #[test]
    fn square_region_is_the_grid() {
        let r = build_lattice_region(LatticeKind::Square, 10, &unit_square(), 0.1).unwrap();
        let grid = build_grid(10, 10).unwrap();
        assert_eq!(r.embedding.num_vertices(), 100);
        assert_eq!(r.embedding.num_edges(), grid.num_edges());
        // Vertex v of the region sits at grid position ((i + 0.5)/10, (j + 0.5)/10).
        let to_grid = |p: Point| ((p.x * 10.0 - 0.5).round() as usize, (p.y * 10.0 - 0.5).round() as usize);
        let mut grid_edges: Vec<_> = grid.graph().edges().iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
        let mut region_edges: Vec<_> = r
            .embedding
            .graph()
            .edges()
            .iter()
            .map(|&(a, b)| {
                let (ia, ja) = to_grid(r.embedding.positions()[a]);
                let (ib, jb) = to_grid(r.embedding.positions()[b]);
                let (x, y) = (ja * 10 + ia, jb * 10 + ib);
                (x.min(y), x.max(y))
            })
            .collect();
        grid_edges.sort();
        region_edges.sort();
        assert_eq!(grid_edges, region_edges);
        let wired = compute_dual(&grid, true).unwrap();
        assert_eq!(r.dual.graph().num_vertices(), wired.graph().num_vertices());
        assert_eq!(r.dual.graph().num_edges(), wired.graph().num_edges());
        assert!(r.boundary_distance < 1e-9, "{}", r.boundary_distance);
        assert_eq!(r.boundary_cycle.len(), 40);
    }

    #[test]
    fn other_lattices_satisfy_euler() {
        for kind in [LatticeKind::Triangular, LatticeKind::Hexagonal] {
            let r = build_lattice_region(kind, 20, &unit_square(), 0.2).unwrap();
            let e = &r.embedding;
            assert_eq!(e.num_vertices() + e.num_faces(), e.num_edges() + 2);
            assert!(e.positions().iter().all(|&p| polygon_contains(unit_square().outer_boundary(), p)));
            assert!(r.boundary_distance < 0.2);
        }
    }

    #[test]
    fn tiny_delta_is_rejected() {
        // A square not aligned with the lattice: the dual cycle cannot follow
        // its boundary closer than a fraction of the spacing.
        let d = vertical_strips(1, 0.93, 0.93).unwrap();
        let err = build_lattice_region(LatticeKind::Square, 10, &d, 0.005).unwrap_err();
        match err {
            Error::NoBoundaryCycle { achieved, .. } => assert!((0.005..0.1).contains(&achieved)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn bridges_of_a_barbell() {
        let g = Graph::new(6, vec![(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5), (5, 3)]).unwrap();
        let b = bridges(&g);
        assert_eq!(b.iter().filter(|&&x| x).count(), 1);
        assert!(b[3]);
        let multi = Graph::new(2, vec![(0, 1), (0, 1)]).unwrap();
        assert!(!bridges(&multi).iter().any(|&x| x));
    }
}
