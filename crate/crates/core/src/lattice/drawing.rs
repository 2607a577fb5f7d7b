//! Plane graph drawings with polyline edges and labelled inner faces.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{signed_area, Point};

#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub points: Vec<Point>,
    pub from: usize,
    pub to: usize,
}

/// A drawing `D`: vertices, polyline curves between them, and the inner
/// faces, each a closed chain of oriented curves. The outer face is
/// implicit.
#[derive(Debug, Clone)]
pub struct PlaneGraphD {
    vertices: Vec<Point>,
    curves: Vec<Curve>,
    faces: Vec<Vec<(usize, bool)>>,
    face_polygons: Vec<Vec<Point>>,
    outer: Vec<Point>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CurveJson {
    pub points: Vec<[f64; 2]>,
    pub from: usize,
    pub to: usize,
}

/// Faces list oriented curve ids as `[id, 1]` (along the curve) or
/// `[id, -1]` (against it).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PlaneGraphDJson {
    pub vertices: Vec<[f64; 2]>,
    pub curves: Vec<CurveJson>,
    pub faces: Vec<Vec<(usize, i8)>>,
}

const TOL: f64 = 1e-9;

fn pt(a: [f64; 2]) -> Point {
    Point::new(a[0], a[1])
}

impl PlaneGraphD {
    /// `faces[i]` lists `(curve, forward)` pairs forming a closed chain.
    pub fn new(vertices: Vec<Point>, curves: Vec<Curve>, faces: Vec<Vec<(usize, bool)>>) -> Result<Self> {
        let bad = |msg: String| Error::InvalidEmbedding(msg);
        if faces.is_empty() {
            return Err(Error::EmptyGeometry);
        }
        for (i, c) in curves.iter().enumerate() {
            if c.points.len() < 2 || c.from >= vertices.len() || c.to >= vertices.len() {
                return Err(bad(format!("curve {i} is malformed")));
            }
            if c.points[0].dist(vertices[c.from]) > TOL || c.points.last().unwrap().dist(vertices[c.to]) > TOL {
                return Err(bad(format!("curve {i} does not join its endpoints")));
            }
        }
        let mut face_polygons = Vec::with_capacity(faces.len());
        let mut uses = vec![0usize; curves.len()];
        for (fi, face) in faces.iter().enumerate() {
            let mut ring: Vec<Point> = Vec::new();
            let mut at: Option<usize> = None;
            let mut first = None;
            for &(c, forward) in face {
                let curve = curves.get(c).ok_or_else(|| bad(format!("face {fi} uses unknown curve {c}")))?;
                uses[c] += 1;
                let (start, end) = if forward { (curve.from, curve.to) } else { (curve.to, curve.from) };
                if at.is_some_and(|v| v != start) {
                    return Err(bad(format!("face {fi} is not a chain at curve {c}")));
                }
                first.get_or_insert(start);
                at = Some(end);
                let pts: Vec<Point> =
                    if forward { curve.points.clone() } else { curve.points.iter().rev().copied().collect() };
                ring.extend_from_slice(&pts[..pts.len() - 1]);
            }
            if at != first {
                return Err(bad(format!("face {fi} is not closed")));
            }
            if signed_area(&ring) < 0.0 {
                ring.reverse();
            }
            face_polygons.push(ring);
        }
        if let Some(c) = uses.iter().position(|&u| u > 2) {
            return Err(bad(format!("curve {c} borders more than two faces")));
        }
        let outer = outer_ring(&curves, &uses)?;
        Ok(PlaneGraphD { vertices, curves, faces, face_polygons, outer })
    }

    pub fn from_json(json: &PlaneGraphDJson) -> Result<Self> {
        let faces = json
            .faces
            .iter()
            .map(|f| {
                f.iter()
                    .map(|&(c, o)| match o {
                        1 => Ok((c, true)),
                        -1 => Ok((c, false)),
                        _ => Err(Error::InvalidEmbedding(format!("orientation {o} is not 1 or -1"))),
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let curves = json
            .curves
            .iter()
            .map(|c| Curve { points: c.points.iter().copied().map(pt).collect(), from: c.from, to: c.to })
            .collect();
        PlaneGraphD::new(json.vertices.iter().copied().map(pt).collect(), curves, faces)
    }

    pub fn to_json(&self) -> PlaneGraphDJson {
        PlaneGraphDJson {
            vertices: self.vertices.iter().map(|p| [p.x, p.y]).collect(),
            curves: self
                .curves
                .iter()
                .map(|c| CurveJson { points: c.points.iter().map(|p| [p.x, p.y]).collect(), from: c.from, to: c.to })
                .collect(),
            faces: self.faces.iter().map(|f| f.iter().map(|&(c, fw)| (c, if fw { 1 } else { -1 })).collect()).collect(),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::from_json(&serde_json::from_str(text)?)
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn curves(&self) -> &[Curve] {
        &self.curves
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    /// Counter-clockwise boundary of inner face `i`.
    pub fn face_polygon(&self, i: usize) -> &[Point] {
        &self.face_polygons[i]
    }

    /// Counter-clockwise boundary of the union of the inner faces.
    pub fn outer_boundary(&self) -> &[Point] {
        &self.outer
    }

    /// Largest distance between two points of the drawing.
    pub fn diameter(&self) -> f64 {
        let mut d: f64 = 0.0;
        for a in &self.outer {
            for b in &self.outer {
                d = d.max(a.dist(*b));
            }
        }
        d
    }
}

/// Chains the curves used by exactly one face into the outer boundary.
fn outer_ring(curves: &[Curve], uses: &[usize]) -> Result<Vec<Point>> {
    let mut boundary: Vec<usize> = (0..curves.len()).filter(|&c| uses[c] == 1).collect();
    let Some(c0) = boundary.pop() else {
        return Err(Error::InvalidEmbedding("drawing has no outer boundary".into()));
    };
    let mut ring: Vec<Point> = curves[c0].points[..curves[c0].points.len() - 1].to_vec();
    let start = curves[c0].from;
    let mut at = curves[c0].to;
    while at != start {
        let pos = boundary
            .iter()
            .position(|&c| curves[c].from == at || curves[c].to == at)
            .ok_or_else(|| Error::InvalidEmbedding(format!("outer boundary breaks at vertex {at}")))?;
        let c = boundary.swap_remove(pos);
        let curve = &curves[c];
        if curve.from == at {
            ring.extend_from_slice(&curve.points[..curve.points.len() - 1]);
            at = curve.to;
        } else {
            ring.extend(curve.points[1..].iter().rev());
            at = curve.from;
        }
    }
    if !boundary.is_empty() {
        return Err(Error::InvalidEmbedding("outer boundary is not a single cycle".into()));
    }
    if signed_area(&ring) < 0.0 {
        ring.reverse();
    }
    Ok(ring)
}

/// The `[0, width] x [0, height]` rectangle cut into `k` equal vertical
/// strips, numbered left to right.
pub fn vertical_strips(k: usize, width: f64, height: f64) -> Result<PlaneGraphD> {
    if k == 0 || !(width > 0.0 && height > 0.0) {
        return Err(Error::InvalidParameter("strips need k >= 1 and a positive size".into()));
    }
    let x = |i: usize| width * i as f64 / k as f64;
    // Vertices: bottom row 0..=k, then top row k+1..=2k+1.
    let mut vertices: Vec<Point> = (0..=k).map(|i| Point::new(x(i), 0.0)).collect();
    vertices.extend((0..=k).map(|i| Point::new(x(i), height)));
    let top = |i: usize| k + 1 + i;
    let seg = |a: usize, b: usize| Curve { points: vec![vertices[a], vertices[b]], from: a, to: b };
    // Curves: bottom segments 0..k, top segments k..2k, verticals 2k..=3k.
    let mut curves: Vec<Curve> = (0..k).map(|i| seg(i, i + 1)).collect();
    curves.extend((0..k).map(|i| seg(top(i), top(i + 1))));
    curves.extend((0..=k).map(|i| seg(i, top(i))));
    let faces = (0..k).map(|i| vec![(i, true), (2 * k + i + 1, true), (k + i, false), (2 * k + i, false)]).collect();
    PlaneGraphD::new(vertices, curves, faces)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::polygon_contains;

    #[test]
    fn strips_have_expected_faces() {
        let d = vertical_strips(3, 1.0, 1.0).unwrap();
        assert_eq!(d.num_faces(), 3);
        assert_eq!(d.outer_boundary().len(), 8);
        assert!((signed_area(d.outer_boundary()) - 1.0).abs() < 1e-12);
        for i in 0..3 {
            assert!((signed_area(d.face_polygon(i)) - 1.0 / 3.0).abs() < 1e-12);
            let c = Point::new((i as f64 + 0.5) / 3.0, 0.5);
            assert!(polygon_contains(d.face_polygon(i), c));
        }
        assert!((d.diameter() - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn json_round_trip() {
        let d = vertical_strips(2, 1.0, 1.0).unwrap();
        let text = serde_json::to_string(&d.to_json()).unwrap();
        assert!(text.contains("[2,1]") || text.contains("[0,1]"));
        let back = PlaneGraphD::parse(&text).unwrap();
        assert_eq!(back.face_polygon(1), d.face_polygon(1));
    }

    #[test]
    fn rejects_open_faces() {
        let v = vec![Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(0.0, 1.0)];
        let c = |a: usize, b: usize| Curve { points: vec![v[a], v[b]], from: a, to: b };
        let curves = vec![c(0, 1), c(1, 2), c(2, 0)];
        assert!(PlaneGraphD::new(v.clone(), curves.clone(), vec![vec![(0, true), (1, true)]]).is_err());
        assert!(PlaneGraphD::new(v, curves, vec![vec![(0, true), (1, true), (2, true)]]).is_ok());
    }
}
