//! Closed polygonal regions with shortest-path queries.
//!
//! A region is a set of boundary loops with free space on the left: the
//! outer loop runs counterclockwise, holes run clockwise. Loops may be weakly
//! simple, so a vertex can occur several times (a pinch point where a wall
//! touches an obstacle, or where a wall ends inside free space). Every
//! occurrence owns the angular sector of free directions between its two
//! incident edges, and a path may only pass through an occurrence inside one
//! sector. This is what makes pinch points impassable.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::environment::Environment;
use crate::geom::{
    point_in_ring, point_segment_distance, segment_intersection, Containment, Point, Polyline,
    SegmentIntersection,
};

pub type VertexId = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EdgeLabel {
    Outer,
    Obstacle(usize),
    Wall(u32),
    Snip,
}

impl EdgeLabel {
    /// Part of the environment boundary (as opposed to a guarded path or snip).
    pub fn is_domain(self) -> bool {
        matches!(self, EdgeLabel::Outer | EdgeLabel::Obstacle(_))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryLoop {
    pub points: Vec<Point>,
    pub ids: Vec<VertexId>,
    /// Labels of edge `i`, running from `points[i]` to `points[i + 1]`.
    pub labels: Vec<Vec<EdgeLabel>>,
}

impl BoundaryLoop {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn edge(&self, i: usize) -> (Point, Point) {
        (self.points[i], self.points[(i + 1) % self.points.len()])
    }

    pub fn signed_area(&self) -> f64 {
        crate::geom::signed_area(&self.points)
    }
}

#[derive(Debug, Clone)]
struct Occurrence {
    p: Point,
    id: VertexId,
    dir_next: Point,
    sector: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Site {
    Interior,
    Edge { dir: Point },
    Vertex { occ: usize },
}

/// A query point classified against the region boundary.
#[derive(Debug, Clone, PartialEq)]
pub struct Anchor {
    pub p: Point,
    sites: Vec<Site>,
    /// Set when the anchor is a single graph node.
    node: Option<usize>,
}

impl Anchor {
    pub fn on_boundary(&self) -> bool {
        !matches!(self.sites.as_slice(), [Site::Interior])
    }
}

/// Single-source shortest distances to every graph node.
#[derive(Debug, Clone)]
pub struct Field {
    pub source: Anchor,
    dist: Vec<f64>,
    pred: Vec<u32>,
}

const NO_PRED: u32 = u32::MAX;

impl Field {
    pub fn node_distance(&self, node: usize) -> f64 {
        self.dist[node]
    }
}

#[derive(Debug, Clone)]
struct FlatEdge {
    a: Point,
    b: Point,
    lo: Point,
    hi: Point,
}

#[derive(Debug, Clone)]
pub struct Region {
    loops: Vec<BoundaryLoop>,
    occ: Vec<Occurrence>,
    /// Occurrence indices sharing a vertex id.
    groups: Vec<(Point, Vec<usize>)>,
    group_of: Vec<usize>,
    edges: Vec<FlatEdge>,
    nodes: Vec<usize>,
    adj: Vec<Vec<(u32, f64)>>,
    tol: f64,
    /// Paths may pass through pinch points from one sector to another.
    passable: bool,
}

const ANG_TOL: f64 = 1e-9;

fn ccw_angle(from: Point, to: Point) -> f64 {
    let a = from.cross(to).atan2(from.dot(to));
    if a < 0.0 {
        a + TAU
    } else {
        a
    }
}

impl Region {
    pub fn from_environment(env: &Environment) -> Region {
        let tol = env.tolerance();
        let mut loops = Vec::new();
        let mut next_id: VertexId = 0;
        let n = env.outer.len();
        loops.push(BoundaryLoop {
            points: env.outer.vertices().to_vec(),
            ids: (0..n as VertexId).collect(),
            labels: vec![vec![EdgeLabel::Outer]; n],
        });
        next_id += n as VertexId;
        for (i, obs) in env.obstacles.iter().enumerate() {
            let m = obs.len();
            let mut points = obs.vertices().to_vec();
            let mut ids: Vec<VertexId> = (next_id..next_id + m as VertexId).collect();
            points.reverse();
            ids.reverse();
            // Keep the loop starting at the obstacle's first vertex.
            points.rotate_right(1);
            ids.rotate_right(1);
            loops.push(BoundaryLoop {
                points,
                ids,
                labels: vec![vec![EdgeLabel::Obstacle(i)]; m],
            });
            next_id += m as VertexId;
        }
        Region::from_loops(loops, tol)
    }

    /// Builds a region from loops (first loop is the outer one).
    pub fn from_loops(loops: Vec<BoundaryLoop>, tol: f64) -> Region {
        Region::build(loops, tol, false)
    }

    /// Same loops, but pinch points join their sectors and each bridge
    /// segment between two boundary vertices can be walked: the metric of the
    /// closed region rather than of its interior.
    pub fn closure(&self, bridges: &[(Point, Point)]) -> Region {
        let mut r = Region::build_nodes(self.loops.clone(), self.tol, true, bridges);
        r.build_graph();
        let tol = r.tol;
        let node_at = |p: Point| (0..r.nodes.len()).find(|&i| r.node_point(i).dist(p) <= tol);
        let mut extra = Vec::new();
        for &(a, b) in bridges {
            if let (Some(i), Some(j)) = (node_at(a), node_at(b)) {
                if i != j && !r.adj[i].iter().any(|&(k, _)| k as usize == j) {
                    extra.push((i, j, a.dist(b)));
                }
            }
        }
        for (i, j, w) in extra {
            r.adj[i].push((j as u32, w));
            r.adj[j].push((i as u32, w));
        }
        r
    }

    /// Whether some vertex occurs more than once on the boundary.
    pub fn has_pinches(&self) -> bool {
        self.groups.iter().any(|(_, o)| o.len() > 1)
    }

    fn build(loops: Vec<BoundaryLoop>, tol: f64, passable: bool) -> Region {
        let mut region = Region::build_nodes(loops, tol, passable, &[]);
        region.build_graph();
        region
    }

    fn build_nodes(
        loops: Vec<BoundaryLoop>,
        tol: f64,
        passable: bool,
        bridges: &[(Point, Point)],
    ) -> Region {
        let mut occ = Vec::new();
        let mut edges = Vec::new();
        for lp in &loops {
            let n = lp.points.len();
            for i in 0..n {
                let p = lp.points[i];
                let next = lp.points[(i + 1) % n];
                let prev = lp.points[(i + n - 1) % n];
                let dn = (next - p).normalized();
                let dp = (prev - p).normalized();
                let mut sector = ccw_angle(dn, dp);
                if sector < ANG_TOL {
                    sector = TAU;
                }
                occ.push(Occurrence {
                    p,
                    id: lp.ids[i],
                    dir_next: dn,
                    sector,
                });
                let lo = Point::new(p.x.min(next.x) - tol, p.y.min(next.y) - tol);
                let hi = Point::new(p.x.max(next.x) + tol, p.y.max(next.y) + tol);
                edges.push(FlatEdge {
                    a: p,
                    b: next,
                    lo,
                    hi,
                });
            }
        }
        let mut groups: Vec<(Point, Vec<usize>)> = Vec::new();
        let mut group_of = vec![0; occ.len()];
        let mut by_id: std::collections::BTreeMap<VertexId, usize> = Default::default();
        for (i, o) in occ.iter().enumerate() {
            match by_id.get(&o.id) {
                Some(&g) => groups[g].1.push(i),
                None => {
                    by_id.insert(o.id, groups.len());
                    groups.push((o.p, vec![i]));
                }
            }
            group_of[i] = by_id[&o.id];
        }
        let reflex = |i: usize| occ[i].sector > std::f64::consts::PI + ANG_TOL;
        let mut nodes: Vec<usize> = if passable {
            // One node per vertex, carrying all of its sectors.
            groups
                .iter()
                .filter(|(p, o)| {
                    o.len() > 1
                        || o.iter().any(|&i| reflex(i))
                        || bridges
                            .iter()
                            .any(|(a, b)| a.dist(*p) <= tol || b.dist(*p) <= tol)
                })
                .map(|(_, o)| o[0])
                .collect()
        } else {
            (0..occ.len()).filter(|&i| reflex(i)).collect()
        };
        nodes.sort_by_key(|&i| (occ[i].id, i));
        Region {
            loops,
            occ,
            groups,
            group_of,
            edges,
            nodes,
            adj: vec![],
            tol,
            passable,
        }
    }

    fn build_graph(&mut self) {
        let n = self.nodes.len();
        let anchors: Vec<Anchor> = (0..n).map(|i| self.node_anchor(i)).collect();
        let mut adj = vec![Vec::new(); n];
        for i in 0..n {
            for j in i + 1..n {
                if self.occ[self.nodes[i]].id == self.occ[self.nodes[j]].id {
                    continue;
                }
                if self.visible(&anchors[i], &anchors[j]) {
                    let w = anchors[i].p.dist(anchors[j].p);
                    adj[i].push((j as u32, w));
                    adj[j].push((i as u32, w));
                }
            }
        }
        self.adj = adj;
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn loops(&self) -> &[BoundaryLoop] {
        &self.loops
    }

    pub fn outer_loop(&self) -> &BoundaryLoop {
        &self.loops[0]
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn node_point(&self, node: usize) -> Point {
        self.occ[self.nodes[node]].p
    }

    pub fn node_id(&self, node: usize) -> VertexId {
        self.occ[self.nodes[node]].id
    }

    pub fn graph_edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.adj.iter().enumerate().flat_map(|(i, v)| {
            v.iter()
                .filter(move |(j, _)| (*j as usize) > i)
                .map(move |&(j, w)| (i, j as usize, w))
        })
    }

    pub fn node_anchor(&self, node: usize) -> Anchor {
        let o = self.nodes[node];
        let sites = if self.passable {
            self.groups[self.group_of[o]]
                .1
                .iter()
                .map(|&occ| Site::Vertex { occ })
                .collect()
        } else {
            vec![Site::Vertex { occ: o }]
        };
        Anchor {
            p: self.occ[o].p,
            sites,
            node: Some(node),
        }
    }

    /// Classifies `p` as an interior point, an edge point or a vertex.
    pub fn anchor(&self, p: Point) -> Anchor {
        let tol = self.tol;
        let mut sites = Vec::new();
        for (q, occs) in &self.groups {
            if q.dist(p) <= tol {
                sites.extend(occs.iter().map(|&o| Site::Vertex { occ: o }));
            }
        }
        if sites.is_empty() {
            for e in &self.edges {
                if p.x < e.lo.x || p.x > e.hi.x || p.y < e.lo.y || p.y > e.hi.y {
                    continue;
                }
                if point_segment_distance(p, e.a, e.b) <= tol {
                    sites.push(Site::Edge {
                        dir: (e.b - e.a).normalized(),
                    });
                }
            }
        }
        if sites.is_empty() {
            sites.push(Site::Interior);
        }
        Anchor {
            p,
            sites,
            node: None,
        }
    }

    pub fn contains(&self, p: Point) -> Containment {
        let tol = self.tol;
        if self
            .edges
            .iter()
            .any(|e| point_segment_distance(p, e.a, e.b) <= tol)
        {
            return Containment::Boundary;
        }
        if !point_in_ring(p, &self.loops[0].points) {
            return Containment::Outside;
        }
        if self.loops[1..].iter().any(|l| point_in_ring(p, &l.points)) {
            return Containment::Outside;
        }
        Containment::Inside
    }

    fn in_sector(&self, o: usize, d: Point, len: f64) -> bool {
        let oc = &self.occ[o];
        let slack = ANG_TOL + 2.0 * self.tol / len;
        let a = ccw_angle(oc.dir_next, d);
        a <= oc.sector + slack || a >= TAU - slack
    }

    fn allowed(&self, anchor: &Anchor, d: Point, len: f64) -> bool {
        anchor.sites.iter().any(|s| match *s {
            Site::Interior => true,
            Site::Edge { dir } => dir.cross(d) / len >= -(ANG_TOL + 2.0 * self.tol / len),
            Site::Vertex { occ } => self.in_sector(occ, d, len),
        })
    }

    /// Whether the closed segment between two anchors stays in the region.
    pub fn visible(&self, a: &Anchor, b: &Anchor) -> bool {
        let tol = self.tol;
        let d = b.p - a.p;
        let len = d.norm();
        if len <= tol {
            return true;
        }
        if !self.allowed(a, d, len) || !self.allowed(b, -d, len) {
            return false;
        }
        let lo = Point::new(a.p.x.min(b.p.x) - tol, a.p.y.min(b.p.y) - tol);
        let hi = Point::new(a.p.x.max(b.p.x) + tol, a.p.y.max(b.p.y) + tol);
        for e in &self.edges {
            if e.hi.x < lo.x || e.lo.x > hi.x || e.hi.y < lo.y || e.lo.y > hi.y {
                continue;
            }
            if let SegmentIntersection::Point {
                touching: false, ..
            } = segment_intersection(a.p, b.p, e.a, e.b, tol)
            {
                return false;
            }
        }
        for (c, occs) in &self.groups {
            let c = *c;
            if c.x < lo.x || c.x > hi.x || c.y < lo.y || c.y > hi.y {
                continue;
            }
            if c.dist(a.p) <= tol || c.dist(b.p) <= tol {
                continue;
            }
            if point_segment_distance(c, a.p, b.p) > tol {
                continue;
            }
            let da = a.p - c;
            let db = b.p - c;
            let (la, lb) = (da.norm(), db.norm());
            let through = if self.passable && occs.len() > 1 {
                occs.iter().any(|&o| self.in_sector(o, da, la))
                    && occs.iter().any(|&o| self.in_sector(o, db, lb))
            } else {
                occs.iter()
                    .any(|&o| self.in_sector(o, da, la) && self.in_sector(o, db, lb))
            };
            if !through {
                return false;
            }
        }
        true
    }

    pub fn segment_visible(&self, p: Point, q: Point) -> bool {
        self.visible(&self.anchor(p), &self.anchor(q))
    }

    /// Dijkstra from an anchor over the visibility graph.
    pub fn field(&self, src: &Anchor) -> Field {
        let n = self.nodes.len();
        let mut dist = vec![f64::INFINITY; n];
        let mut pred = vec![NO_PRED; n];
        for (i, d) in dist.iter_mut().enumerate() {
            if src.node == Some(i) {
                *d = 0.0;
                continue;
            }
            let na = self.node_anchor(i);
            if self.visible(src, &na) {
                *d = src.p.dist(na.p);
            }
        }
        let mut done = vec![false; n];
        loop {
            let mut best = usize::MAX;
            let mut bd = f64::INFINITY;
            for i in 0..n {
                if !done[i] && dist[i] < bd {
                    bd = dist[i];
                    best = i;
                }
            }
            if best == usize::MAX {
                break;
            }
            done[best] = true;
            for &(j, w) in &self.adj[best] {
                let j = j as usize;
                let nd = bd + w;
                if nd < dist[j] - 1e-15 * nd.max(1.0) {
                    dist[j] = nd;
                    pred[j] = best as u32;
                }
            }
        }
        Field {
            source: src.clone(),
            dist,
            pred,
        }
    }

    /// Distance from the field's source to `q` with the last node used
    /// (`None` when the straight segment is shortest).
    pub fn field_query(&self, field: &Field, q: &Anchor) -> (f64, Option<usize>) {
        let mut best = if self.visible(&field.source, q) {
            field.source.p.dist(q.p)
        } else {
            f64::INFINITY
        };
        let mut last = None;
        if let Some(n) = q.node {
            if field.dist[n] < best {
                return (field.dist[n], Some(n));
            }
        }
        let mut cand: Vec<(f64, usize)> = field
            .dist
            .iter()
            .enumerate()
            .filter(|(_, d)| d.is_finite())
            .map(|(i, d)| (d + self.node_point(i).dist(q.p), i))
            .filter(|(k, _)| *k < best)
            .collect();
        cand.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        for (key, i) in cand {
            if key >= best {
                break;
            }
            if self.visible(&self.node_anchor(i), q) {
                best = key;
                last = Some(i);
                break;
            }
        }
        (best, last)
    }

    pub fn field_distance(&self, field: &Field, q: &Anchor) -> f64 {
        self.field_query(field, q).0
    }

    /// Points of the shortest path from the field's source to `q`.
    pub fn field_path(&self, field: &Field, q: &Anchor) -> Option<Vec<Point>> {
        let (d, last) = self.field_query(field, q);
        if !d.is_finite() {
            return None;
        }
        let mut pts = vec![q.p];
        let mut cur = last;
        while let Some(i) = cur {
            pts.push(self.node_point(i));
            cur = match field.pred[i] {
                NO_PRED => None,
                p => Some(p as usize),
            };
        }
        pts.push(field.source.p);
        pts.reverse();
        Some(pts)
    }

    /// Path from the field's source to `q` entering through node `last`
    /// (`None` for the direct segment), with the node ids on the way.
    pub fn route_via(
        &self,
        field: &Field,
        last: Option<usize>,
        q: Point,
    ) -> (Vec<Point>, Vec<VertexId>) {
        let mut pts = vec![q];
        let mut ids = Vec::new();
        let mut cur = last;
        while let Some(i) = cur {
            pts.push(self.node_point(i));
            ids.push(self.node_id(i));
            cur = match field.pred[i] {
                NO_PRED => None,
                p => Some(p as usize),
            };
        }
        pts.push(field.source.p);
        pts.reverse();
        ids.reverse();
        if pts.len() >= 2 && pts[pts.len() - 1].dist(pts[pts.len() - 2]) <= self.tol {
            pts.pop();
            if pts.len() == 1 {
                pts.push(q);
            }
        }
        (pts, ids)
    }

    pub fn distance(&self, a: Point, b: Point) -> f64 {
        let fa = self.field(&self.anchor(a));
        self.field_distance(&fa, &self.anchor(b))
    }

    /// Shortest path from `a` to `b`. Among paths of equal length (within
    /// tolerance) the one with the lexicographically smallest sequence of
    /// vertex ids wins, the direct segment first.
    pub fn shortest_path(&self, a: Point, b: Point) -> Option<ShortestPath> {
        let aa = self.anchor(a);
        let ab = self.anchor(b);
        let fb = self.field(&ab);
        self.shortest_path_with(&aa, &fb)
    }

    /// Like [`Region::shortest_path`] with a precomputed field from the target.
    pub fn shortest_path_with(&self, a: &Anchor, target_field: &Field) -> Option<ShortestPath> {
        let b = &target_field.source;
        let total = self.field_distance(target_field, a);
        if !total.is_finite() {
            return None;
        }
        let tie = self.tol.max(1e-12 * total);
        let mut points = vec![a.p];
        let mut ids = Vec::new();
        let mut cur = a.clone();
        let mut acc = 0.0;
        let mut guard = 0;
        loop {
            guard += 1;
            if guard > 4 * self.nodes.len() + 4 {
                break;
            }
            if acc + cur.p.dist(b.p) <= total + tie && self.visible(&cur, b) {
                if cur.p.dist(b.p) > self.tol {
                    points.push(b.p);
                }
                let line = polyline_from(points);
                return Some(ShortestPath {
                    line,
                    vertex_ids: ids,
                    length: total,
                });
            }
            let mut pick: Option<(VertexId, usize)> = None;
            for i in 0..self.nodes.len() {
                let dt = target_field.dist[i];
                if !dt.is_finite() {
                    continue;
                }
                let np = self.node_point(i);
                let step = cur.p.dist(np);
                if step <= self.tol || acc + step + dt > total + tie {
                    continue;
                }
                let key = (self.node_id(i), i);
                if pick.is_some_and(|pk| key >= pk) {
                    continue;
                }
                if self.visible(&cur, &self.node_anchor(i)) {
                    pick = Some(key);
                }
            }
            let Some((id, i)) = pick else { break };
            acc += cur.p.dist(self.node_point(i));
            points.push(self.node_point(i));
            ids.push(id);
            cur = self.node_anchor(i);
        }
        // Numerical fallback: the predecessor tree of the target field.
        let mut pts = self.field_path(target_field, a)?;
        pts.reverse();
        let ids = pts[1..pts.len().saturating_sub(1)]
            .iter()
            .filter_map(|p| {
                self.groups
                    .iter()
                    .find(|(q, _)| q.dist(*p) <= self.tol)
                    .map(|(_, o)| self.occ[o[0]].id)
            })
            .collect();
        Some(ShortestPath {
            line: polyline_from(pts),
            vertex_ids: ids,
            length: total,
        })
    }

    /// A vertex not reachable from the first outer vertex, if any.
    pub fn disconnected_vertex(&self) -> Option<Point> {
        let src = self.anchor(self.loops[0].points[0]);
        let f = self.field(&src);
        self.groups
            .iter()
            .map(|(p, _)| *p)
            .find(|&p| !self.field_distance(&f, &self.anchor(p)).is_finite())
    }
}

fn polyline_from(points: Vec<Point>) -> Polyline {
    let p0 = points[0];
    Polyline::new(points).unwrap_or_else(|_| Polyline::degenerate(p0))
}

/// A shortest path with the ids of the interior vertices it bends at.
#[derive(Debug, Clone, PartialEq)]
pub struct ShortestPath {
    pub line: Polyline,
    pub vertex_ids: Vec<VertexId>,
    pub length: f64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Polygon;

    fn env1() -> Region {
        Region::from_environment(&Environment::env1())
    }

    #[test]
    fn obstacle_corners_are_the_only_nodes() {
        let r = env1();
        assert_eq!(r.node_count(), 4);
        let ids: Vec<_> = (0..4).map(|i| r.node_id(i)).collect();
        assert_eq!(ids, vec![4, 5, 6, 7]);
        assert_eq!(r.node_point(0), Point::new(4., 4.));
    }

    #[test]
    fn diagonal_blocked_by_obstacle() {
        let r = env1();
        assert!(!r.segment_visible(Point::new(0., 0.), Point::new(10., 10.)));
        assert!(r.segment_visible(Point::new(0., 0.), Point::new(10., 0.)));
        // Sliding along an obstacle edge is allowed.
        assert!(r.segment_visible(Point::new(2., 4.), Point::new(8., 4.)));
        // Entering the obstacle through a corner is not.
        assert!(!r.segment_visible(Point::new(3., 3.), Point::new(5., 5.)));
    }

    #[test]
    fn corner_to_corner_distance() {
        let r = env1();
        let d = r.distance(Point::new(0., 0.), Point::new(10., 10.));
        let expected = 2.0 * (52f64).sqrt();
        assert!((d - expected).abs() < 1e-9, "{d} vs {expected}");
        let p = r
            .shortest_path(Point::new(0., 0.), Point::new(10., 10.))
            .unwrap();
        // Ties resolve to the smaller vertex id: (6,4) has id 5, (4,6) has id 7.
        assert_eq!(p.vertex_ids, vec![5]);
        assert_eq!(p.line.vertices()[1], Point::new(6., 4.));
        assert!((p.line.length() - expected).abs() < 1e-9);
    }

    #[test]
    fn empty_square_is_straight() {
        let r = Region::from_environment(&Environment::env0());
        let p = r
            .shortest_path(Point::new(1., 1.), Point::new(9., 3.))
            .unwrap();
        assert_eq!(p.line.vertices().len(), 2);
        assert!(p.vertex_ids.is_empty());
    }

    #[test]
    fn pinch_point_blocks_passage() {
        // Square whose boundary loop detours around a triangle attached to
        // the bottom edge at (5,0). Sliding along the bottom edge through
        // the attachment point would cross between the two sectors.
        let pts = vec![
            Point::new(0., 0.),
            Point::new(5., 0.),
            Point::new(4., 3.),
            Point::new(6., 3.),
            Point::new(5., 0.),
            Point::new(10., 0.),
            Point::new(10., 10.),
            Point::new(0., 10.),
        ];
        let ids = vec![0, 1, 2, 3, 1, 4, 5, 6];
        let lp = BoundaryLoop {
            labels: vec![vec![EdgeLabel::Outer]; 8],
            points: pts,
            ids,
        };
        let r = Region::from_loops(vec![lp], 1e-8);
        assert!(!r.segment_visible(Point::new(2., 0.), Point::new(8., 0.)));
        assert!(r.segment_visible(Point::new(2., 0.), Point::new(5., 0.)));
        assert!(r.segment_visible(Point::new(5., 0.), Point::new(8., 0.)));
        let d = r.distance(Point::new(2., 0.), Point::new(8., 0.));
        assert!(d > 6.0 + 1.0);
    }

    #[test]
    fn l_shaped_room_bends_at_reflex_corner() {
        let outer = Polygon::new(vec![
            Point::new(0., 0.),
            Point::new(10., 0.),
            Point::new(10., 4.),
            Point::new(4., 4.),
            Point::new(4., 10.),
            Point::new(0., 10.),
        ])
        .unwrap();
        let r = Region::from_environment(&Environment::new("L", outer, vec![]));
        assert_eq!(r.node_count(), 1);
        let p = r
            .shortest_path(Point::new(9., 2.), Point::new(2., 9.))
            .unwrap();
        assert_eq!(p.line.vertices()[1], Point::new(4., 4.));
    }
}
