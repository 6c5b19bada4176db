//! Axis-aligned geometric primitives: points, segments, rectangles and
//! rectilinear polygons with holes.

use serde::{Deserialize, Serialize};

use crate::error::GeometryError;
use crate::scalar::Scalar;

/// A point in the plane with exact rational coordinates.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize, PartialOrd, Ord)]
pub struct Point {
    pub x: Scalar,
    pub y: Scalar,
}

impl Point {
    pub fn new(x: Scalar, y: Scalar) -> Self {
        Point { x, y }
    }

    pub fn translated(&self, dx: &Scalar, dy: &Scalar) -> Point {
        Point::new(&self.x + dx, &self.y + dy)
    }
}

impl std::fmt::Debug for Point {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// `pt!(1, 2)` or `pt!(1/2 via scalar exprs)`.
#[macro_export]
macro_rules! pt {
    ($x:expr, $y:expr) => {
        $crate::geometry::Point::new($x.into_scalar(), $y.into_scalar())
    };
}

/// Helper trait so `pt!` accepts integers and scalars alike.
pub trait IntoScalar {
    fn into_scalar(self) -> Scalar;
}

impl IntoScalar for i64 {
    fn into_scalar(self) -> Scalar {
        Scalar::from_int(self)
    }
}

impl IntoScalar for Scalar {
    fn into_scalar(self) -> Scalar {
        self
    }
}

impl IntoScalar for (i64, i64) {
    fn into_scalar(self) -> Scalar {
        Scalar::ratio(self.0, self.1)
    }
}

/// ℓ∞ (Chebyshev) distance.
pub fn linf_dist(p: &Point, q: &Point) -> Scalar {
    let dx = (&p.x - &q.x).abs();
    let dy = (&p.y - &q.y).abs();
    dx.max(dy)
}

/// ℓ1 (rectilinear) distance.
pub fn l1_dist(p: &Point, q: &Point) -> Scalar {
    (&p.x - &q.x).abs() + (&p.y - &q.y).abs()
}

/// An axis-parallel segment; zero length is allowed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AxisSegment {
    pub a: Point,
    pub b: Point,
}

impl AxisSegment {
    /// Fails when the endpoints differ in both coordinates.
    pub fn new(a: Point, b: Point) -> Result<Self, GeometryError> {
        if a.x != b.x && a.y != b.y {
            return Err(GeometryError::NotAxisParallel);
        }
        Ok(AxisSegment { a, b })
    }

    pub fn is_vertical(&self) -> bool {
        self.a.x == self.b.x
    }

    pub fn is_horizontal(&self) -> bool {
        self.a.y == self.b.y
    }

    pub fn length(&self) -> Scalar {
        l1_dist(&self.a, &self.b)
    }

    pub fn is_degenerate(&self) -> bool {
        self.a == self.b
    }
}

/// Closed axis-aligned rectangle; degenerate extents are allowed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rect {
    pub x_lo: Scalar,
    pub x_hi: Scalar,
    pub y_lo: Scalar,
    pub y_hi: Scalar,
}

impl Rect {
    pub fn new(x_lo: Scalar, x_hi: Scalar, y_lo: Scalar, y_hi: Scalar) -> Self {
        assert!(x_lo <= x_hi && y_lo <= y_hi, "inverted rectangle");
        Rect { x_lo, x_hi, y_lo, y_hi }
    }

    pub fn of_ints(x_lo: i64, x_hi: i64, y_lo: i64, y_hi: i64) -> Self {
        Rect::new(
            Scalar::from_int(x_lo),
            Scalar::from_int(x_hi),
            Scalar::from_int(y_lo),
            Scalar::from_int(y_hi),
        )
    }

    pub fn contains_point(&self, p: &Point) -> bool {
        self.x_lo <= p.x && p.x <= self.x_hi && self.y_lo <= p.y && p.y <= self.y_hi
    }

    pub fn width(&self) -> Scalar {
        &self.x_hi - &self.x_lo
    }

    pub fn height(&self) -> Scalar {
        &self.y_hi - &self.y_lo
    }

    pub fn area(&self) -> Scalar {
        self.width() * self.height()
    }

    pub fn is_degenerate(&self) -> bool {
        self.x_lo == self.x_hi || self.y_lo == self.y_hi
    }

    /// Grows the rectangle by `r` on every side.
    pub fn dilated(&self, r: &Scalar) -> Rect {
        Rect::new(
            &self.x_lo - r,
            &self.x_hi + r,
            &self.y_lo - r,
            &self.y_hi + r,
        )
    }
}

/// A simple rectilinear ring given by its vertices in order (either
/// orientation). Consecutive vertices must differ in exactly one coordinate.
pub type Ring = Vec<Point>;

/// Rectilinear polygon with holes. The outer ring and the holes are simple,
/// non-self-touching, built of axis-parallel edges without dangling spikes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RectilinearPolygon {
    pub outer: Ring,
    pub holes: Vec<Ring>,
}

impl RectilinearPolygon {
    pub fn new(outer: Ring, holes: Vec<Ring>) -> Result<Self, GeometryError> {
        let poly = RectilinearPolygon { outer, holes };
        poly.validate()?;
        Ok(poly)
    }

    pub fn rectangle(r: &Rect) -> Self {
        RectilinearPolygon {
            outer: vec![
                Point::new(r.x_lo.clone(), r.y_lo.clone()),
                Point::new(r.x_hi.clone(), r.y_lo.clone()),
                Point::new(r.x_hi.clone(), r.y_hi.clone()),
                Point::new(r.x_lo.clone(), r.y_hi.clone()),
            ],
            holes: vec![],
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.outer.len() + self.holes.iter().map(|h| h.len()).sum::<usize>()
    }

    pub fn bounding_box(&self) -> Rect {
        let mut it = self.outer.iter();
        let first = it.next().expect("validated ring is nonempty");
        let mut x_lo = first.x.clone();
        let mut x_hi = first.x.clone();
        let mut y_lo = first.y.clone();
        let mut y_hi = first.y.clone();
        for p in self.outer.iter().chain(self.holes.iter().flatten()) {
            if p.x < x_lo {
                x_lo = p.x.clone();
            }
            if p.x > x_hi {
                x_hi = p.x.clone();
            }
            if p.y < y_lo {
                y_lo = p.y.clone();
            }
            if p.y > y_hi {
                y_hi = p.y.clone();
            }
        }
        Rect::new(x_lo, x_hi, y_lo, y_hi)
    }

    /// Edges of one ring as segments (closing edge included).
    pub fn ring_edges(ring: &Ring) -> Vec<AxisSegment> {
        let n = ring.len();
        (0..n)
            .map(|i| AxisSegment {
                a: ring[i].clone(),
                b: ring[(i + 1) % n].clone(),
            })
            .collect()
    }

    pub fn all_edges(&self) -> Vec<AxisSegment> {
        let mut edges = Self::ring_edges(&self.outer);
        for h in &self.holes {
            edges.extend(Self::ring_edges(h));
        }
        edges
    }

    /// Structural validation: axis-parallel simple rings, no dangling edges,
    /// holes strictly inside the outer ring and pairwise disjoint.
    pub fn validate(&self) -> Result<(), GeometryError> {
        validate_ring(&self.outer)?;
        for h in &self.holes {
            validate_ring(h)?;
        }
        // Rings must not intersect or touch each other.
        let mut rings: Vec<&Ring> = vec![&self.outer];
        rings.extend(self.holes.iter());
        for i in 0..rings.len() {
            for j in (i + 1)..rings.len() {
                for e in RectilinearPolygon::ring_edges(rings[i]) {
                    for f in RectilinearPolygon::ring_edges(rings[j]) {
                        if segments_touch(&e, &f) {
                            return Err(GeometryError::RingsTouch);
                        }
                    }
                }
            }
        }
        // Each hole strictly inside the outer ring and outside other holes.
        for (hi, h) in self.holes.iter().enumerate() {
            if !point_in_ring(&h[0], &self.outer) {
                return Err(GeometryError::HoleOutsideOuter);
            }
            for (hj, other) in self.holes.iter().enumerate() {
                if hi != hj && point_in_ring(&h[0], other) {
                    return Err(GeometryError::HolesNested);
                }
            }
        }
        Ok(())
    }

    /// Even-odd point membership against outer ring and holes: inside the
    /// outer ring and not in any hole interior. Boundary points count as
    /// inside (the workspace is closed).
    pub fn contains_point(&self, p: &Point) -> bool {
        if point_on_ring(p, &self.outer) {
            return true;
        }
        if !point_in_ring(p, &self.outer) {
            return false;
        }
        for h in &self.holes {
            if point_on_ring(p, h) {
                return true;
            }
            if point_in_ring(p, h) {
                return false;
            }
        }
        true
    }
}

fn validate_ring(ring: &Ring) -> Result<(), GeometryError> {
    if ring.len() < 4 {
        return Err(GeometryError::TooFewVertices);
    }
    let n = ring.len();
    let edges = RectilinearPolygon::ring_edges(ring);
    for (i, e) in edges.iter().enumerate() {
        if e.is_degenerate() {
            return Err(GeometryError::DegenerateEdge);
        }
        if e.a.x != e.b.x && e.a.y != e.b.y {
            return Err(GeometryError::NotAxisParallel);
        }
        // Dangling edge: two consecutive edges folding back onto each other.
        let next = &edges[(i + 1) % n];
        if e.is_vertical() == next.is_vertical() {
            // Collinear consecutive edges are only valid when they continue in
            // the same direction; a reversal is a dangling spike.
            let dir = |s: &AxisSegment| -> std::cmp::Ordering {
                if s.is_vertical() {
                    s.a.y.cmp(&s.b.y)
                } else {
                    s.a.x.cmp(&s.b.x)
                }
            };
            if dir(e) != dir(next) {
                return Err(GeometryError::DanglingEdge);
            }
        }
    }
    // Simplicity: non-adjacent edges must not intersect or touch; adjacent
    // edges may share only their common endpoint.
    for i in 0..n {
        for j in (i + 1)..n {
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            if adjacent {
                continue;
            }
            if segments_touch(&edges[i], &edges[j]) {
                return Err(GeometryError::SelfIntersecting);
            }
        }
    }
    Ok(())
}

/// True when two axis-parallel segments share at least one point.
pub fn segments_touch(a: &AxisSegment, b: &AxisSegment) -> bool {
    fn span(lo: &Scalar, hi: &Scalar) -> (Scalar, Scalar) {
        if lo <= hi {
            (lo.clone(), hi.clone())
        } else {
            (hi.clone(), lo.clone())
        }
    }
    let (ax0, ax1) = span(&a.a.x, &a.b.x);
    let (ay0, ay1) = span(&a.a.y, &a.b.y);
    let (bx0, bx1) = span(&b.a.x, &b.b.x);
    let (by0, by1) = span(&b.a.y, &b.b.y);
    // Axis-parallel segments intersect iff their bounding boxes do.
    ax0 <= bx1 && bx0 <= ax1 && ay0 <= by1 && by0 <= ay1
}

/// Even-odd ray crossing test; strictly-inside only (boundary excluded).
/// Casts a horizontal ray to the right from `p`.
pub fn point_in_ring(p: &Point, ring: &Ring) -> bool {
    if point_on_ring(p, ring) {
        return false;
    }
    let mut crossings = 0usize;
    for e in RectilinearPolygon::ring_edges(ring) {
        if !e.is_vertical() {
            continue;
        }
        let x = &e.a.x;
        if *x <= p.x {
            continue;
        }
        let (lo, hi) = if e.a.y <= e.b.y {
            (&e.a.y, &e.b.y)
        } else {
            (&e.b.y, &e.a.y)
        };
        // Half-open rule [lo, hi) avoids double counting at shared vertices.
        if *lo <= p.y && p.y < *hi {
            crossings += 1;
        }
    }
    crossings % 2 == 1
}

/// True when `p` lies on the boundary of the ring.
pub fn point_on_ring(p: &Point, ring: &Ring) -> bool {
    RectilinearPolygon::ring_edges(ring).iter().any(|e| {
        if e.is_vertical() {
            let (lo, hi) = if e.a.y <= e.b.y {
                (&e.a.y, &e.b.y)
            } else {
                (&e.b.y, &e.a.y)
            };
            p.x == e.a.x && *lo <= p.y && p.y <= *hi
        } else {
            let (lo, hi) = if e.a.x <= e.b.x {
                (&e.a.x, &e.b.x)
            } else {
                (&e.b.x, &e.a.x)
            };
            p.y == e.a.y && *lo <= p.x && p.x <= *hi
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;

    fn p(x: i64, y: i64) -> Point {
        Point::new(Scalar::from_int(x), Scalar::from_int(y))
    }

    #[test]
    fn linf_examples() {
        assert_eq!(linf_dist(&p(0, 0), &p(1, 2)), Scalar::from_int(2));
        assert_eq!(linf_dist(&p(1, 1), &p(1, 1)), Scalar::zero());
        let a = Point::new(Scalar::half(), Scalar::zero());
        let b = Point::new(Scalar::from_int(2), Scalar::ratio(1, 4));
        assert_eq!(linf_dist(&a, &b), Scalar::ratio(3, 2));
    }

    #[test]
    fn l1_examples() {
        assert_eq!(l1_dist(&p(0, 0), &p(1, 2)), Scalar::from_int(3));
        assert_eq!(l1_dist(&p(1, 1), &p(1, 1)), Scalar::zero());
        let a = Point::new(Scalar::half(), Scalar::zero());
        let b = Point::new(Scalar::from_int(2), Scalar::ratio(1, 4));
        assert_eq!(l1_dist(&a, &b), Scalar::ratio(7, 4));
    }

    #[test]
    fn segment_must_be_axis_parallel() {
        assert!(AxisSegment::new(p(0, 0), p(1, 1)).is_err());
        assert!(AxisSegment::new(p(0, 0), p(0, 5)).is_ok());
        let z = AxisSegment::new(p(2, 2), p(2, 2)).unwrap();
        assert!(z.is_degenerate());
        assert_eq!(z.length(), Scalar::zero());
    }

    #[test]
    fn rectangle_polygon_is_valid() {
        let poly = RectilinearPolygon::rectangle(&Rect::of_ints(0, 4, 0, 3));
        assert!(poly.validate().is_ok());
        assert_eq!(poly.vertex_count(), 4);
        assert!(poly.contains_point(&p(2, 1)));
        assert!(poly.contains_point(&p(0, 0)));
        assert!(!poly.contains_point(&p(5, 1)));
    }

    #[test]
    fn l_shape_membership() {
        let ring = vec![p(0, 0), p(6, 0), p(6, 3), p(3, 3), p(3, 6), p(0, 6)];
        let poly = RectilinearPolygon::new(ring, vec![]).unwrap();
        assert!(poly.contains_point(&p(5, 2)));
        assert!(poly.contains_point(&p(1, 5)));
        assert!(!poly.contains_point(&p(5, 5)));
        assert!(poly.contains_point(&p(3, 3)));
    }

    #[test]
    fn hole_validation() {
        let outer = RectilinearPolygon::rectangle(&Rect::of_ints(0, 10, 0, 10)).outer;
        let hole = vec![p(3, 3), p(5, 3), p(5, 5), p(3, 5)];
        let poly = RectilinearPolygon::new(outer.clone(), vec![hole.clone()]).unwrap();
        assert!(!poly.contains_point(&p(4, 4)));
        assert!(poly.contains_point(&p(3, 3)));

        // Hole touching the outer boundary is rejected.
        let touching = vec![p(0, 3), p(2, 3), p(2, 5), p(0, 5)];
        assert!(RectilinearPolygon::new(outer, vec![touching]).is_err());
    }

    #[test]
    fn dangling_edge_rejected() {
        let ring = vec![p(0, 0), p(4, 0), p(4, 2), p(6, 2), p(4, 2), p(4, 4), p(0, 4)];
        assert!(RectilinearPolygon::new(ring, vec![]).is_err());
    }

    #[test]
    fn self_intersection_rejected() {
        let ring = vec![p(0, 0), p(4, 0), p(4, 4), p(2, 4), p(2, -1), p(0, -1)];
        assert!(RectilinearPolygon::new(ring, vec![]).is_err());
    }
}
