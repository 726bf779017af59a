//! Path operations used by the round planner.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::geom::{Point, Polyline};

use super::homotopy::HomotopySignature;
use super::region::{Field, Region};
use super::territory::{FaceChoice, GeodesicPath, RegionType, Territory, Wall};
use super::GeodesicError;

/// Id given to a path that is only temporarily used as a wall.
pub const PROBE_WALL: u32 = u32::MAX - 1;

/// Samples along the boundary arc before bisection.
pub const SPLIT_SAMPLES: usize = 64;

/// A point of a boundary arc reached by two shortest paths of different classes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitPoint {
    pub x: Point,
    /// Arc-length parameter of `x` along the arc.
    pub param: f64,
    pub paths: [GeodesicPath; 2],
}

fn to_polyline(pts: Vec<Point>) -> Polyline {
    let p0 = pts[0];
    Polyline::new(pts).unwrap_or_else(|_| Polyline::degenerate(p0))
}

struct ArcProbe<'a> {
    t: &'a Territory,
    region: &'a Region,
    field: Field,
    delta: &'a Polyline,
}

impl ArcProbe<'_> {
    fn query(&self, s: f64) -> (f64, Option<usize>, Vec<Point>) {
        let q = self.delta.point_at_clamped(s);
        let (d, last) = self.region.field_query(&self.field, &self.region.anchor(q));
        let (pts, _) = self.region.route_via(&self.field, last, q);
        (d, last, pts)
    }

    fn word(&self, pts: &[Point]) -> Vec<(usize, i8)> {
        self.t.rays().letters(pts)
    }

    /// Whether the shortest paths at `s0 < s1` differ in homotopy class.
    fn jumps(&self, a: &[Point], s0: f64, s1: f64, b: &[Point]) -> bool {
        let mid = self.delta.subpath(s0, s1);
        let mut letters = self.word(a);
        letters.extend(self.word(mid.vertices()));
        letters.extend(HomotopySignature::from_letters(self.word(b)).inverse().0);
        !HomotopySignature::from_letters(letters).is_trivial()
    }

    fn len_via(&self, last: Option<usize>, q: Point) -> f64 {
        match last {
            None => self.field.source.p.dist(q),
            Some(n) => self.field.node_distance(n) + self.region.node_point(n).dist(q),
        }
    }

    fn path(&self, last: Option<usize>, q: Point) -> GeodesicPath {
        let (pts, ids) = self.region.route_via(&self.field, last, q);
        let line = to_polyline(pts);
        let signature = self.t.signature(&line);
        GeodesicPath {
            length: line.length(),
            line,
            vertex_ids: ids,
            signature,
        }
    }
}

/// Finds a split point on the territory's Δ arc, seen from anchor `u`.
pub fn find_split_point(t: &Territory) -> Result<SplitPoint, GeodesicError> {
    match t.region_type() {
        RegionType::One | RegionType::OnePrime => {}
        found => {
            return Err(GeodesicError::WrongType {
                expected: "1 or 1'",
                found,
            })
        }
    }
    let a = t.anchors();
    let u = a.u.expect("typed territory has an anchor");
    let delta = &t.deltas()[0];
    let tol = 1e3 * t.region().tol();
    // Guarded walls from u to the ends of the arc, if any.
    let wall_to = |q: Point| {
        t.walls().iter().find_map(|w| {
            let p = &w.path;
            if p.start().dist(u) <= tol && p.end().dist(q) <= tol {
                Some(p.clone())
            } else if p.end().dist(u) <= tol && p.start().dist(q) <= tol {
                Some(p.reversed())
            } else {
                None
            }
        })
    };
    let ends = [wall_to(delta.start()), wall_to(delta.end())];
    find_split_point_with(t, u, delta, &ends)
}

/// Split point on an arbitrary boundary arc for paths from `u`.
pub fn find_split_point_on(
    t: &Territory,
    u: Point,
    delta: &Polyline,
) -> Result<SplitPoint, GeodesicError> {
    find_split_point_with(t, u, delta, &[None, None])
}

/// Like [`find_split_point_on`], with known shortest paths from `u` to the
/// ends of the arc. A split is reported at an end when the path found there
/// is as short as the known one but in another class.
pub fn find_split_point_with(
    t: &Territory,
    u: Point,
    delta: &Polyline,
    ends: &[Option<Polyline>; 2],
) -> Result<SplitPoint, GeodesicError> {
    let region = t.metric().as_ref();
    let field = region.field(&region.anchor(u));
    let probe = ArcProbe {
        t,
        region,
        field,
        delta,
    };
    let len = delta.length();
    let tau = 1e-6 * t.env().euclidean_diameter();
    for (end, s) in ends.iter().zip([0.0, len]) {
        let Some(known) = end else { continue };
        let (d, last, pts) = probe.query(s);
        let other = probe.word(known.vertices());
        let mut letters = probe.word(&pts);
        letters.extend(HomotopySignature::from_letters(other).inverse().0);
        if (d - known.length()).abs() <= tau
            && !HomotopySignature::from_letters(letters).is_trivial()
        {
            let x = delta.point_at_clamped(s);
            let k = GeodesicPath {
                line: known.clone(),
                vertex_ids: vec![],
                length: known.length(),
                signature: t.signature(known),
            };
            return Ok(SplitPoint {
                x,
                param: s,
                paths: [k, probe.path(last, x)],
            });
        }
    }
    for n in [SPLIT_SAMPLES, 8 * SPLIT_SAMPLES] {
        let params: Vec<f64> = (0..=n).map(|k| len * k as f64 / n as f64).collect();
        let samples: Vec<_> = params.iter().map(|&s| probe.query(s)).collect();
        for k in 0..n {
            let (a, b) = (&samples[k], &samples[k + 1]);
            if !a.0.is_finite() || !b.0.is_finite() {
                continue;
            }
            if !probe.jumps(&a.2, params[k], params[k + 1], &b.2) {
                continue;
            }
            let (mut lo, mut hi) = (params[k], params[k + 1]);
            let (mut qlo, mut qhi) = (a.clone(), b.clone());
            while hi - lo > tau {
                let m = 0.5 * (lo + hi);
                let qm = probe.query(m);
                if probe.jumps(&qlo.2, lo, m, &qm.2) {
                    hi = m;
                    qhi = qm;
                } else {
                    lo = m;
                    qlo = qm;
                }
            }
            // Equalize the two route lengths inside the bracket.
            let f = |s: f64| {
                let q = delta.point_at_clamped(s);
                probe.len_via(qlo.1, q) - probe.len_via(qhi.1, q)
            };
            let (mut a0, mut b0) = (lo, hi);
            if f(a0) <= 0.0 && f(b0) >= 0.0 {
                for _ in 0..80 {
                    let m = 0.5 * (a0 + b0);
                    if f(m) <= 0.0 {
                        a0 = m;
                    } else {
                        b0 = m;
                    }
                }
            }
            let s = 0.5 * (a0 + b0);
            let x = delta.point_at_clamped(s);
            let xa = region.anchor(x);
            let reach = |last: Option<usize>| match last {
                None => region.visible(&probe.field.source, &xa),
                Some(n) => region.visible(&region.node_anchor(n), &xa),
            };
            let (pa, pb) = if reach(qlo.1) && reach(qhi.1) {
                (probe.path(qlo.1, x), probe.path(qhi.1, x))
            } else {
                let xl = delta.point_at_clamped(lo);
                let xh = delta.point_at_clamped(hi);
                (probe.path(qlo.1, xl), probe.path(qhi.1, xh))
            };
            return Ok(SplitPoint {
                x,
                param: s,
                paths: [pa, pb],
            });
        }
    }
    Err(GeodesicError::NoSplit)
}

/// The snip segment at the first point where `path` touches `obstacle`.
pub fn snip_segment(t: &Territory, path: &Polyline, obstacle: usize) -> Option<(Point, Point)> {
    let env = t.env();
    let poly = &env.obstacles[obstacle];
    let tol = t.region().tol();
    let boundary = poly.boundary();
    let cum = path.cumulative_lengths();
    let verts = path.vertices();
    let j = (0..verts.len()).find(|&j| boundary.distance_to(verts[j]) <= tol)?;
    if j == 0 {
        return None;
    }
    let x = verts[j];
    let mut shortest = verts[j - 1].dist(x);
    if j + 1 < verts.len() {
        shortest = shortest.min(verts[j + 1].dist(x));
    }
    for (a, b) in poly.edges() {
        if a.dist(x) <= tol || b.dist(x) <= tol {
            shortest = shortest.min(a.dist(b));
        }
    }
    let eps = env.d_min().min(shortest) / 4.0;
    let y = path.point_at_clamped(cum[j] - eps);
    let (sx, _) = boundary.locate(x);
    let bl = boundary.length();
    let mut best: Option<(f64, Point)> = None;
    for s in [sx - eps, sx + eps] {
        let z = boundary.point_at_clamped(s.rem_euclid(bl));
        let mid = y.lerp(z, 0.5);
        if !t.contains(mid) || !t.region().segment_visible(y, z) {
            continue;
        }
        let ang = (y - x).normalized().dot((z - x).normalized());
        if best.is_none_or(|(a, _)| ang > a) {
            best = Some((ang, z));
        }
    }
    best.map(|(_, z)| (y, z))
}

/// A shortest path between the endpoints of `pi1` in a different homotopy
/// class, obtained by guarding `pi1` and snipping at its first touch with `obstacle`.
pub fn second_shortest_path(
    t: &Territory,
    pi1: &GeodesicPath,
    obstacle: usize,
) -> Result<GeodesicPath, GeodesicError> {
    let snip = snip_segment(t, &pi1.line, obstacle).ok_or(GeodesicError::NoTouch(obstacle))?;
    let probe = t.refine(
        vec![Wall {
            id: PROBE_WALL,
            path: pi1.line.clone(),
        }],
        &[snip],
        FaceChoice::AttachedTo(obstacle),
    )?;
    let mut p = probe.shortest_path(pi1.start(), pi1.end())?;
    p.signature = t.signature(&p.line);
    Ok(p)
}

/// Type 2: shortest (u,v)-path once both walls are snipped at their first
/// touch with an attached obstacle.
pub fn third_path(t: &Territory) -> Result<GeodesicPath, GeodesicError> {
    if t.region_type() != RegionType::Two {
        return Err(GeodesicError::WrongType {
            expected: "2",
            found: t.region_type(),
        });
    }
    let a = t.anchors();
    let (u, v) = (a.u.unwrap(), a.v.unwrap());
    let mut snips = Vec::new();
    for w in t.walls() {
        let snip = t
            .attached()
            .iter()
            .filter(|(_, host)| *host == w.id)
            .find_map(|&(o, _)| {
                snip_segment(t, &w.path, o).or_else(|| snip_segment(t, &w.path.reversed(), o))
            });
        snips.extend(snip);
    }
    let snipped = if snips.is_empty() {
        t.clone()
    } else {
        t.refine(vec![], &snips, FaceChoice::LargestWithin)?
    };
    let mut p = snipped.shortest_path(u, v)?;
    p.signature = t.signature(&p.line);
    Ok(p)
}

/// Whether `path` is a shortest path in the territory between its endpoints.
pub fn is_minimal_path(t: &Territory, path: &Polyline) -> bool {
    let region = t.metric();
    let tol = region.tol();
    if !path.segments().all(|(a, b)| region.segment_visible(a, b)) {
        return false;
    }
    let d = region.distance(path.start(), path.end());
    path.length() <= d + tol.max(1e-9 * d)
}

/// Projection onto a minimal path: the point at arc length
/// `min(d(start, e), length)` along it.
#[derive(Debug, Clone)]
pub struct Projector {
    region: Arc<Region>,
    field: Field,
    path: Polyline,
}

impl Projector {
    pub fn new(region: Arc<Region>, path: Polyline) -> Projector {
        let field = region.field(&region.anchor(path.start()));
        Projector {
            region,
            field,
            path,
        }
    }

    pub fn path(&self) -> &Polyline {
        &self.path
    }

    pub fn region(&self) -> &Arc<Region> {
        &self.region
    }

    /// Distance from the path start to `e`; infinite when `e` is unreachable.
    pub fn start_distance(&self, e: Point) -> f64 {
        self.region
            .field_distance(&self.field, &self.region.anchor(e))
    }

    pub fn param(&self, e: Point) -> f64 {
        let d = self.start_distance(e);
        if d.is_finite() {
            d.min(self.path.length())
        } else {
            self.path.locate(e).0
        }
    }

    pub fn project(&self, e: Point) -> Point {
        self.path.point_at_clamped(self.param(e))
    }
}

pub fn path_projection(t: &Territory, path: &Polyline, e: Point) -> Point {
    Projector::new(t.metric().clone(), path.clone()).project(e)
}
