//! Plane geometry on `f64` points: segment projections, polygon containment,
//! and Hausdorff distances.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn dist(self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn lerp(self, other: Point, t: f64) -> Point {
        Point::new(self.x + (other.x - self.x) * t, self.y + (other.y - self.y) * t)
    }
}

/// Euclidean distance from `p` to the closed segment `a`-`b`.
pub fn point_segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let (dx, dy) = (b.x - a.x, b.y - a.y);
    let len2 = dx * dx + dy * dy;
    if len2 == 0.0 {
        return p.dist(a);
    }
    let t = (((p.x - a.x) * dx + (p.y - a.y) * dy) / len2).clamp(0.0, 1.0);
    p.dist(Point::new(a.x + t * dx, a.y + t * dy))
}

/// Distance from `p` to an open polyline (consecutive points joined).
pub fn point_polyline_distance(p: Point, line: &[Point]) -> f64 {
    match line {
        [] => f64::INFINITY,
        [only] => p.dist(*only),
        _ => line.windows(2).map(|w| point_segment_distance(p, w[0], w[1])).fold(f64::INFINITY, f64::min),
    }
}

/// Distance from `p` to the boundary of a closed polygon.
pub fn point_ring_distance(p: Point, ring: &[Point]) -> f64 {
    if ring.len() < 2 {
        return point_polyline_distance(p, ring);
    }
    let closing = point_segment_distance(p, ring[ring.len() - 1], ring[0]);
    point_polyline_distance(p, ring).min(closing)
}

/// Winding-number containment; points on the boundary count as inside.
pub fn polygon_contains(ring: &[Point], p: Point) -> bool {
    if ring.len() < 3 {
        return false;
    }
    if point_ring_distance(p, ring) <= 1e-12 {
        return true;
    }
    let mut winding = 0i32;
    for i in 0..ring.len() {
        let a = ring[i];
        let b = ring[(i + 1) % ring.len()];
        let cross = (b.x - a.x) * (p.y - a.y) - (p.x - a.x) * (b.y - a.y);
        if a.y <= p.y {
            if b.y > p.y && cross > 0.0 {
                winding += 1;
            }
        } else if b.y <= p.y && cross < 0.0 {
            winding -= 1;
        }
    }
    winding != 0
}

/// Distance from `p` to the closed region bounded by `ring`; zero inside.
pub fn point_polygon_distance(p: Point, ring: &[Point]) -> f64 {
    if polygon_contains(ring, p) {
        0.0
    } else {
        point_ring_distance(p, ring)
    }
}

pub fn signed_area(ring: &[Point]) -> f64 {
    let n = ring.len();
    (0..n)
        .map(|i| {
            let (a, b) = (ring[i], ring[(i + 1) % n]);
            a.x * b.y - b.x * a.y
        })
        .sum::<f64>()
        / 2.0
}

/// The second operand of a Hausdorff distance.
#[derive(Debug, Clone, Copy)]
pub enum Shape<'a> {
    Points(&'a [Point]),
    /// Closed polygon boundary.
    Ring(&'a [Point]),
    /// Open polyline.
    Polyline(&'a [Point]),
}

impl Shape<'_> {
    fn distance_from(&self, p: Point) -> f64 {
        match *self {
            Shape::Points(ps) => ps.iter().map(|q| p.dist(*q)).fold(f64::INFINITY, f64::min),
            Shape::Ring(r) => point_ring_distance(p, r),
            Shape::Polyline(l) => point_polyline_distance(p, l),
        }
    }

    fn points(&self) -> &[Point] {
        match *self {
            Shape::Points(ps) | Shape::Ring(ps) | Shape::Polyline(ps) => ps,
        }
    }

    fn is_empty(&self) -> bool {
        self.points().is_empty()
    }
}

/// Directed distance `sup_{a in A} d(a, B)` for a finite point set `A`.
pub fn directed_hausdorff(a: &[Point], b: Shape<'_>) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyGeometry);
    }
    Ok(a.iter().map(|&p| b.distance_from(p)).fold(0.0, f64::max))
}

/// Symmetric Hausdorff distance between a point set and a point set or a
/// curve. For curves, the reverse direction is measured from the curve's
/// vertices, which is exact for a point set against a polyline when the
/// point set contains the polyline's vertices' nearest points; callers that
/// need curve-to-curve accuracy densify first (see [`densify`]).
pub fn hausdorff_distance(a: &[Point], b: Shape<'_>) -> Result<f64> {
    let forward = directed_hausdorff(a, b)?;
    let backward = match b {
        Shape::Points(ps) => directed_hausdorff(ps, Shape::Points(a))?,
        Shape::Ring(r) | Shape::Polyline(r) => directed_hausdorff(r, Shape::Points(a))?,
    };
    Ok(forward.max(backward))
}

/// Resamples a polyline (closed when `closed`) so consecutive points are at
/// most `step` apart. Original vertices are kept.
pub fn densify(line: &[Point], step: f64, closed: bool) -> Vec<Point> {
    assert!(step > 0.0);
    let mut out = Vec::new();
    let n = line.len();
    let segments = if closed { n } else { n.saturating_sub(1) };
    for i in 0..segments {
        let (a, b) = (line[i], line[(i + 1) % n]);
        let pieces = ((a.dist(b) / step).ceil() as usize).max(1);
        for s in 0..pieces {
            out.push(a.lerp(b, s as f64 / pieces as f64));
        }
    }
    if !closed {
        if let Some(&last) = line.last() {
            out.push(last);
        }
    }
    out
}

fn curve_shape(pts: &[Point], closed: bool) -> Shape<'_> {
    if closed {
        Shape::Ring(pts)
    } else {
        Shape::Polyline(pts)
    }
}

/// Hausdorff distance between two curves, each densified to `step`.
pub fn curve_hausdorff(a: &[Point], a_closed: bool, b: &[Point], b_closed: bool, step: f64) -> Result<f64> {
    let da = densify(a, step, a_closed);
    let db = densify(b, step, b_closed);
    let forward = directed_hausdorff(&da, curve_shape(b, b_closed))?;
    let backward = directed_hausdorff(&db, curve_shape(a, a_closed))?;
    Ok(forward.max(backward))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_square() -> Vec<Point> {
        vec![Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(1.0, 1.0), Point::new(0.0, 1.0)]
    }

    #[test]
    fn segment_projection() {
        let (a, b) = (Point::new(0.0, 0.0), Point::new(2.0, 0.0));
        assert_eq!(point_segment_distance(Point::new(1.0, 3.0), a, b), 3.0);
        assert_eq!(point_segment_distance(Point::new(5.0, 4.0), a, b), 5.0);
    }

    #[test]
    fn containment_and_polygon_distance() {
        let sq = unit_square();
        assert!(polygon_contains(&sq, Point::new(0.5, 0.5)));
        assert!(polygon_contains(&sq, Point::new(1.0, 0.5)));
        assert!(!polygon_contains(&sq, Point::new(1.5, 0.5)));
        assert_eq!(point_polygon_distance(Point::new(0.3, 0.3), &sq), 0.0);
        assert!((point_polygon_distance(Point::new(1.5, 0.5), &sq) - 0.5).abs() < 1e-12);
        assert!((signed_area(&sq) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn hausdorff_examples() {
        let a = [Point::new(0.0, 0.0)];
        let b = [Point::new(3.0, 4.0)];
        assert_eq!(hausdorff_distance(&a, Shape::Points(&b)).unwrap(), 5.0);
        let sq = unit_square();
        assert_eq!(hausdorff_distance(&sq, Shape::Ring(&sq)).unwrap(), 0.0);
        let shifted: Vec<Point> = sq.iter().map(|p| Point::new(p.x + 0.1, p.y)).collect();
        let d = curve_hausdorff(&sq, true, &shifted, true, 0.01).unwrap();
        assert!((d - 0.1).abs() < 1e-9, "{d}");
        assert!(hausdorff_distance(&[], Shape::Points(&b)).is_err());
    }
}
