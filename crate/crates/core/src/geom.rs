//! Planar primitives shared by every other module.
//!
//! Everything is double precision. Incidence decisions take an explicit
//! tolerance `tol`; callers derive it from the environment diameter
//! (see [`crate::environment::EnvironmentMetrics::tolerance`]).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeomError {
    #[error("non-finite coordinate ({0}, {1})")]
    NonFinite(f64, f64),
    #[error("polyline needs at least two distinct vertices")]
    DegeneratePolyline,
    #[error("polygon needs at least three vertices and non-zero area")]
    DegeneratePolygon,
    #[error("arc length {s} outside [0, {len}]")]
    OutOfRange { s: f64, len: f64 },
}

#[derive(Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl From<[f64; 2]> for Point {
    fn from(a: [f64; 2]) -> Self {
        Point::new(a[0], a[1])
    }
}

impl From<Point> for [f64; 2] {
    fn from(p: Point) -> Self {
        [p.x, p.y]
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn checked(x: f64, y: f64) -> Result<Self, GeomError> {
        if x.is_finite() && y.is_finite() {
            Ok(Point { x, y })
        } else {
            Err(GeomError::NonFinite(x, y))
        }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn dot(self, o: Point) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn cross(self, o: Point) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn norm2(self) -> f64 {
        self.dot(self)
    }

    pub fn dist(self, o: Point) -> f64 {
        (self - o).norm()
    }

    pub fn lerp(self, o: Point, t: f64) -> Point {
        self + (o - self) * t
    }

    /// Unit vector in the same direction; the zero vector maps to itself.
    pub fn normalized(self) -> Point {
        let n = self.norm();
        if n == 0.0 {
            self
        } else {
            self * (1.0 / n)
        }
    }

    /// Counterclockwise perpendicular.
    pub fn perp(self) -> Point {
        Point::new(-self.y, self.x)
    }

    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }

    pub fn approx_eq(self, o: Point, tol: f64) -> bool {
        self.dist(o) <= tol
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, s: f64) -> Point {
        Point::new(self.x * s, self.y * s)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

/// Twice the signed area of triangle (a, b, c); positive when counterclockwise.
pub fn orient(a: Point, b: Point, c: Point) -> f64 {
    (b - a).cross(c - a)
}

/// Parameter in [0, 1] of the point of segment ab closest to q.
pub fn project_param(a: Point, b: Point, q: Point) -> f64 {
    let d = b - a;
    let l2 = d.norm2();
    if l2 == 0.0 {
        0.0
    } else {
        ((q - a).dot(d) / l2).clamp(0.0, 1.0)
    }
}

pub fn point_segment_distance(q: Point, a: Point, b: Point) -> f64 {
    q.dist(a.lerp(b, project_param(a, b, q)))
}

/// Minimum distance between two closed segments.
pub fn segment_segment_distance(a1: Point, a2: Point, b1: Point, b2: Point) -> f64 {
    if let SegmentIntersection::Point { .. } | SegmentIntersection::Overlap(..) =
        segment_intersection(a1, a2, b1, b2, 0.0)
    {
        return 0.0;
    }
    point_segment_distance(a1, b1, b2)
        .min(point_segment_distance(a2, b1, b2))
        .min(point_segment_distance(b1, a1, a2))
        .min(point_segment_distance(b2, a1, a2))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SegmentIntersection {
    None,
    /// Single common point. `touching` is set when the point is an endpoint
    /// of either segment.
    Point {
        p: Point,
        touching: bool,
    },
    /// Collinear overlap between the two given points (ordered along the first segment).
    Overlap(Point, Point),
}

/// Intersection of closed segments a1a2 and b1b2.
///
/// Zero-length segments behave as points. Collinearity and endpoint
/// incidence are decided with tolerance `tol` (world units).
pub fn segment_intersection(
    a1: Point,
    a2: Point,
    b1: Point,
    b2: Point,
    tol: f64,
) -> SegmentIntersection {
    let da = a2 - a1;
    let db = b2 - b1;
    let la = da.norm();
    let lb = db.norm();
    if la <= tol && lb <= tol {
        return if a1.dist(b1) <= tol {
            SegmentIntersection::Point {
                p: a1,
                touching: true,
            }
        } else {
            SegmentIntersection::None
        };
    }
    if la <= tol {
        return if point_segment_distance(a1, b1, b2) <= tol {
            SegmentIntersection::Point {
                p: a1,
                touching: true,
            }
        } else {
            SegmentIntersection::None
        };
    }
    if lb <= tol {
        return if point_segment_distance(b1, a1, a2) <= tol {
            SegmentIntersection::Point {
                p: b1,
                touching: true,
            }
        } else {
            SegmentIntersection::None
        };
    }

    // Signed distances of b's endpoints from line a, and vice versa.
    let sb1 = da.cross(b1 - a1) / la;
    let sb2 = da.cross(b2 - a1) / la;
    if sb1.abs() <= tol && sb2.abs() <= tol {
        // Collinear: intersect parameter intervals along a.
        let ua = da * (1.0 / la);
        let t1 = (b1 - a1).dot(ua);
        let t2 = (b2 - a1).dot(ua);
        let lo = t1.min(t2).max(0.0);
        let hi = t1.max(t2).min(la);
        if hi < lo - tol {
            return SegmentIntersection::None;
        }
        if hi - lo <= tol {
            let t = 0.5 * (lo + hi);
            return SegmentIntersection::Point {
                p: a1 + ua * t,
                touching: true,
            };
        }
        return SegmentIntersection::Overlap(a1 + ua * lo, a1 + ua * hi);
    }
    let sa1 = db.cross(a1 - b1) / lb;
    let sa2 = db.cross(a2 - b1) / lb;
    let straddle_b = (sb1 > tol && sb2 < -tol) || (sb1 < -tol && sb2 > tol);
    let straddle_a = (sa1 > tol && sa2 < -tol) || (sa1 < -tol && sa2 > tol);
    if straddle_a && straddle_b {
        let t = sa1 / (sa1 - sa2);
        return SegmentIntersection::Point {
            p: a1.lerp(a2, t),
            touching: false,
        };
    }
    // Endpoint incidences.
    for (q, a, b) in [(b1, a1, a2), (b2, a1, a2), (a1, b1, b2), (a2, b1, b2)] {
        if point_segment_distance(q, a, b) <= tol {
            return SegmentIntersection::Point {
                p: q,
                touching: true,
            };
        }
    }
    SegmentIntersection::None
}

/// Proper crossing: the open segments cross transversally at a single
/// point interior to both.
pub fn segments_cross_properly(a1: Point, a2: Point, b1: Point, b2: Point, tol: f64) -> bool {
    matches!(
        segment_intersection(a1, a2, b1, b2, tol),
        SegmentIntersection::Point {
            touching: false,
            ..
        }
    )
}

/// An open polygonal chain with an arc-length parameterization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Point>", into = "Vec<Point>")]
pub struct Polyline {
    vertices: Vec<Point>,
    cumulative: Vec<f64>,
}

impl TryFrom<Vec<Point>> for Polyline {
    type Error = GeomError;
    fn try_from(v: Vec<Point>) -> Result<Self, GeomError> {
        Polyline::new(v)
    }
}

impl From<Polyline> for Vec<Point> {
    fn from(p: Polyline) -> Self {
        p.vertices
    }
}

impl Polyline {
    /// Builds a polyline, merging consecutive duplicate vertices.
    pub fn new(points: Vec<Point>) -> Result<Self, GeomError> {
        let mut vertices: Vec<Point> = Vec::with_capacity(points.len());
        for p in points {
            if !p.is_finite() {
                return Err(GeomError::NonFinite(p.x, p.y));
            }
            if vertices.last().is_none_or(|&q| q != p) {
                vertices.push(p);
            }
        }
        if vertices.len() < 2 {
            return Err(GeomError::DegeneratePolyline);
        }
        let mut cumulative = Vec::with_capacity(vertices.len());
        let mut acc = 0.0;
        cumulative.push(0.0);
        for w in vertices.windows(2) {
            acc += w[0].dist(w[1]);
            cumulative.push(acc);
        }
        Ok(Polyline {
            vertices,
            cumulative,
        })
    }

    /// A polyline that may collapse to a single point (both ends equal).
    pub fn degenerate(p: Point) -> Self {
        Polyline {
            vertices: vec![p, p],
            cumulative: vec![0.0, 0.0],
        }
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn cumulative_lengths(&self) -> &[f64] {
        &self.cumulative
    }

    pub fn length(&self) -> f64 {
        *self.cumulative.last().unwrap()
    }

    pub fn start(&self) -> Point {
        self.vertices[0]
    }

    pub fn end(&self) -> Point {
        *self.vertices.last().unwrap()
    }

    pub fn segments(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        self.vertices.windows(2).map(|w| (w[0], w[1]))
    }

    /// Point at arc length `s`, clamping values within `tol` of the ends.
    pub fn point_at(&self, s: f64, tol: f64) -> Result<Point, GeomError> {
        let len = self.length();
        if !(s >= -tol && s <= len + tol) {
            return Err(GeomError::OutOfRange { s, len });
        }
        Ok(self.point_at_clamped(s))
    }

    pub fn point_at_clamped(&self, s: f64) -> Point {
        let len = self.length();
        let s = s.clamp(0.0, len);
        let i = match self.cumulative.binary_search_by(|c| c.total_cmp(&s)) {
            Ok(i) => return self.vertices[i],
            Err(i) => i,
        };
        let (a, b) = (self.vertices[i - 1], self.vertices[i]);
        let (ca, cb) = (self.cumulative[i - 1], self.cumulative[i]);
        a.lerp(b, (s - ca) / (cb - ca))
    }

    /// Arc length of the polyline point closest to `q`, with that distance.
    pub fn locate(&self, q: Point) -> (f64, f64) {
        let mut best = (0.0, f64::INFINITY);
        for (i, (a, b)) in self.segments().enumerate() {
            let t = project_param(a, b, q);
            let d = q.dist(a.lerp(b, t));
            if d < best.1 {
                best = (self.cumulative[i] + t * a.dist(b), d);
            }
        }
        best
    }

    pub fn distance_to(&self, q: Point) -> f64 {
        self.locate(q).1
    }

    pub fn reversed(&self) -> Polyline {
        let mut v = self.vertices.clone();
        v.reverse();
        Polyline::new(v).unwrap_or_else(|_| Polyline::degenerate(self.start()))
    }

    /// Sub-chain between arc lengths `s0 <= s1`.
    pub fn subpath(&self, s0: f64, s1: f64) -> Polyline {
        let len = self.length();
        let s0 = s0.clamp(0.0, len);
        let s1 = s1.clamp(s0, len);
        let mut pts = vec![self.point_at_clamped(s0)];
        for (i, &c) in self.cumulative.iter().enumerate() {
            if c > s0 && c < s1 {
                pts.push(self.vertices[i]);
            }
        }
        pts.push(self.point_at_clamped(s1));
        Polyline::new(pts).unwrap_or_else(|_| Polyline::degenerate(self.point_at_clamped(s0)))
    }

    /// Concatenation; the first vertex of `other` is dropped when it repeats our end.
    pub fn concat(&self, other: &Polyline) -> Polyline {
        let mut v = self.vertices.clone();
        v.extend_from_slice(&other.vertices);
        Polyline::new(v).unwrap_or_else(|_| Polyline::degenerate(self.start()))
    }

    /// Inserts extra collinear vertices (used to test parameterization invariance).
    pub fn refined(&self, pieces: usize) -> Polyline {
        let mut v = Vec::new();
        for (a, b) in self.segments() {
            for k in 0..pieces.max(1) {
                v.push(a.lerp(b, k as f64 / pieces.max(1) as f64));
            }
        }
        v.push(self.end());
        Polyline::new(v).unwrap_or_else(|_| self.clone())
    }
}

/// Circle/polyline intersections sorted by arc length; tangential contacts
/// reported once.
pub fn circle_polyline_intersections(
    center: Point,
    radius: f64,
    line: &Polyline,
    tol: f64,
) -> Vec<(Point, f64)> {
    let mut out: Vec<(Point, f64)> = Vec::new();
    let cum = line.cumulative_lengths();
    for (i, (a, b)) in line.segments().enumerate() {
        let d = b - a;
        let len = d.norm();
        if len == 0.0 {
            continue;
        }
        let u = d * (1.0 / len);
        // |a + t u - c|^2 = r^2  =>  t^2 + 2 t (u.(a-c)) + |a-c|^2 - r^2 = 0
        let f = a - center;
        let bq = u.dot(f);
        let cq = f.norm2() - radius * radius;
        let disc = bq * bq - cq;
        if disc < -tol * radius.max(1.0) {
            continue;
        }
        let root = disc.max(0.0).sqrt();
        let ts: &[f64] = if root <= tol {
            &[-bq]
        } else {
            &[-bq - root, -bq + root]
        };
        for &t in ts {
            if t >= -tol && t <= len + tol {
                let t = t.clamp(0.0, len);
                let s = cum[i] + t;
                if out.last().is_none_or(|&(_, ls)| (s - ls).abs() > tol) {
                    out.push((a + u * t, s));
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Containment {
    Inside,
    Boundary,
    Outside,
}

/// A simple polygon stored counterclockwise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "Vec<Point>", from = "Vec<Point>")]
pub struct Polygon {
    vertices: Vec<Point>,
}

impl From<Polygon> for Vec<Point> {
    fn from(p: Polygon) -> Self {
        p.vertices
    }
}

impl From<Vec<Point>> for Polygon {
    fn from(v: Vec<Point>) -> Self {
        Polygon::from_vertices_unchecked(v)
    }
}

impl Polygon {
    /// Builds a polygon, reorienting to counterclockwise.
    pub fn new(vertices: Vec<Point>) -> Result<Self, GeomError> {
        if let Some(p) = vertices.iter().find(|p| !p.is_finite()) {
            return Err(GeomError::NonFinite(p.x, p.y));
        }
        let poly = Polygon::from_vertices_unchecked(vertices);
        if poly.vertices.len() < 3 || poly.area() == 0.0 {
            return Err(GeomError::DegeneratePolygon);
        }
        Ok(poly)
    }

    /// Keeps the vertex list (after orientation normalization) even when
    /// degenerate; validation reports the problems instead.
    pub fn from_vertices_unchecked(mut vertices: Vec<Point>) -> Self {
        if signed_area(&vertices) < 0.0 {
            vertices.reverse();
        }
        Polygon { vertices }
    }

    pub fn rect(x0: f64, y0: f64, x1: f64, y1: f64) -> Self {
        Polygon::from_vertices_unchecked(vec![
            Point::new(x0, y0),
            Point::new(x1, y0),
            Point::new(x1, y1),
            Point::new(x0, y1),
        ])
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn edges(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    pub fn area(&self) -> f64 {
        signed_area(&self.vertices)
    }

    pub fn perimeter(&self) -> f64 {
        self.edges().map(|(a, b)| a.dist(b)).sum()
    }

    /// The boundary as a closed polyline starting at vertex 0.
    pub fn boundary(&self) -> Polyline {
        let mut v = self.vertices.clone();
        v.push(self.vertices[0]);
        Polyline::new(v).expect("polygon boundary has positive length")
    }

    pub fn centroid(&self) -> Point {
        let mut cx = 0.0;
        let mut cy = 0.0;
        let mut a2 = 0.0;
        for (p, q) in self.edges() {
            let c = p.cross(q);
            a2 += c;
            cx += (p.x + q.x) * c;
            cy += (p.y + q.y) * c;
        }
        Point::new(cx / (3.0 * a2), cy / (3.0 * a2))
    }

    /// Even-odd classification with a boundary band of width `tol`.
    pub fn contains(&self, q: Point, tol: f64) -> Containment {
        if self
            .edges()
            .any(|(a, b)| point_segment_distance(q, a, b) <= tol)
        {
            return Containment::Boundary;
        }
        if point_in_ring(q, &self.vertices) {
            Containment::Inside
        } else {
            Containment::Outside
        }
    }

    /// Pairs of non-adjacent edges that intersect (indices of first vertices).
    pub fn self_intersections(&self, tol: f64) -> Vec<(usize, usize)> {
        let n = self.vertices.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let adjacent = j == i + 1 || (i == 0 && j == n - 1);
                let (a1, a2) = (self.vertices[i], self.vertices[(i + 1) % n]);
                let (b1, b2) = (self.vertices[j], self.vertices[(j + 1) % n]);
                let hit = segment_intersection(a1, a2, b1, b2, tol);
                let bad = if adjacent {
                    matches!(hit, SegmentIntersection::Overlap(..))
                } else {
                    !matches!(hit, SegmentIntersection::None)
                };
                if bad {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn is_simple(&self, tol: f64) -> bool {
        self.vertices.len() >= 3 && self.area() > 0.0 && self.self_intersections(tol).is_empty()
    }

    /// Minimum distance between the boundaries of two polygons.
    pub fn boundary_distance(&self, other: &Polygon) -> f64 {
        let mut d = f64::INFINITY;
        for (a1, a2) in self.edges() {
            for (b1, b2) in other.edges() {
                d = d.min(segment_segment_distance(a1, a2, b1, b2));
            }
        }
        d
    }
}

/// Shoelace signed area (positive for counterclockwise rings).
pub fn signed_area(ring: &[Point]) -> f64 {
    let n = ring.len();
    let mut s = 0.0;
    for i in 0..n {
        s += ring[i].cross(ring[(i + 1) % n]);
    }
    0.5 * s
}

/// Crossing-number test, no boundary handling.
pub fn point_in_ring(q: Point, ring: &[Point]) -> bool {
    let n = ring.len();
    let mut inside = false;
    let mut j = n - 1;
    for i in 0..n {
        let (a, b) = (ring[i], ring[j]);
        if (a.y > q.y) != (b.y > q.y) {
            let x = a.x + (q.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if q.x < x {
                inside = !inside;
            }
        }
        j = i;
    }
    inside
}
