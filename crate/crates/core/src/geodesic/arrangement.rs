//! Planar arrangement of labeled segments and its faces.
//!
//! Territories are faces of the arrangement formed by the environment
//! boundary, the guarded paths and snip segments. Segments are split at all
//! mutual incidences, coincident pieces merge and keep every label.

use std::collections::BTreeMap;

use crate::geom::{
    point_in_ring, point_segment_distance, project_param, segment_intersection, signed_area, Point,
    SegmentIntersection,
};

use super::region::{BoundaryLoop, EdgeLabel, Region, VertexId};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LabeledSegment {
    pub a: Point,
    pub b: Point,
    pub label: EdgeLabel,
}

#[derive(Debug, Clone)]
struct HalfEdge {
    from: usize,
    to: usize,
    edge: usize,
    next: usize,
    cycle: usize,
}

#[derive(Debug, Clone)]
pub struct Cycle {
    pub half_edges: Vec<usize>,
    pub area: f64,
}

#[derive(Debug, Clone)]
pub struct Face {
    pub outer: usize,
    pub holes: Vec<usize>,
    pub free: bool,
    pub area: f64,
}

#[derive(Debug, Clone)]
pub struct Arrangement {
    verts: Vec<Point>,
    labels: Vec<Vec<EdgeLabel>>,
    half: Vec<HalfEdge>,
    cycles: Vec<Cycle>,
    faces: Vec<Face>,
    /// Hole cycles with no enclosing outer cycle.
    unbounded: Vec<usize>,
    tol: f64,
}

struct VertexPool {
    pts: Vec<Point>,
    grid: BTreeMap<(i64, i64), Vec<usize>>,
    cell: f64,
    tol: f64,
}

impl VertexPool {
    fn key(&self, p: Point) -> (i64, i64) {
        (
            (p.x / self.cell).floor() as i64,
            (p.y / self.cell).floor() as i64,
        )
    }

    fn find(&self, p: Point) -> Option<usize> {
        let (kx, ky) = self.key(p);
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(v) = self.grid.get(&(kx + dx, ky + dy)) {
                    if let Some(&i) = v.iter().find(|&&i| self.pts[i].dist(p) <= self.tol) {
                        return Some(i);
                    }
                }
            }
        }
        None
    }

    fn insert(&mut self, p: Point) -> usize {
        if let Some(i) = self.find(p) {
            return i;
        }
        let i = self.pts.len();
        self.pts.push(p);
        let k = self.key(p);
        self.grid.entry(k).or_default().push(i);
        i
    }
}

impl Arrangement {
    /// `is_free` decides whether a point strictly inside a bounded face lies
    /// in free space.
    pub fn build(
        segments: &[LabeledSegment],
        tol: f64,
        is_free: impl Fn(Point) -> bool,
    ) -> Arrangement {
        let mut pool = VertexPool {
            pts: vec![],
            grid: BTreeMap::new(),
            cell: (tol * 4.0).max(1e-300),
            tol,
        };
        let segs: Vec<LabeledSegment> = segments
            .iter()
            .copied()
            .filter(|s| s.a.dist(s.b) > tol)
            .collect();
        for s in &segs {
            pool.insert(s.a);
            pool.insert(s.b);
        }
        for i in 0..segs.len() {
            for j in i + 1..segs.len() {
                let (s, t) = (&segs[i], &segs[j]);
                match segment_intersection(s.a, s.b, t.a, t.b, tol) {
                    SegmentIntersection::None => {}
                    SegmentIntersection::Point { p, .. } => {
                        pool.insert(p);
                    }
                    SegmentIntersection::Overlap(p, q) => {
                        pool.insert(p);
                        pool.insert(q);
                    }
                }
            }
        }
        let verts = pool.pts;
        let mut edge_map: BTreeMap<(usize, usize), Vec<EdgeLabel>> = BTreeMap::new();
        for s in &segs {
            let lo = Point::new(s.a.x.min(s.b.x) - tol, s.a.y.min(s.b.y) - tol);
            let hi = Point::new(s.a.x.max(s.b.x) + tol, s.a.y.max(s.b.y) + tol);
            let mut on: Vec<(f64, usize)> = verts
                .iter()
                .enumerate()
                .filter(|(_, p)| p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y)
                .filter(|(_, p)| point_segment_distance(**p, s.a, s.b) <= tol)
                .map(|(i, p)| (project_param(s.a, s.b, *p), i))
                .collect();
            on.sort_by(|a, b| a.0.total_cmp(&b.0));
            on.dedup_by_key(|x| x.1);
            for w in on.windows(2) {
                let (u, v) = (w[0].1, w[1].1);
                if u == v {
                    continue;
                }
                let key = (u.min(v), u.max(v));
                let l = edge_map.entry(key).or_default();
                if !l.contains(&s.label) {
                    l.push(s.label);
                    l.sort();
                }
            }
        }
        let mut labels = Vec::with_capacity(edge_map.len());
        let mut half = Vec::with_capacity(2 * edge_map.len());
        for (e, ((u, v), l)) in edge_map.into_iter().enumerate() {
            labels.push(l);
            half.push(HalfEdge {
                from: u,
                to: v,
                edge: e,
                next: usize::MAX,
                cycle: usize::MAX,
            });
            half.push(HalfEdge {
                from: v,
                to: u,
                edge: e,
                next: usize::MAX,
                cycle: usize::MAX,
            });
        }
        let mut out: Vec<Vec<usize>> = vec![Vec::new(); verts.len()];
        for (h, he) in half.iter().enumerate() {
            out[he.from].push(h);
        }
        let angle = |h: usize| (verts[half[h].to] - verts[half[h].from]).angle();
        for o in &mut out {
            o.sort_by(|&a, &b| angle(a).total_cmp(&angle(b)));
        }
        for h in 0..half.len() {
            let twin = h ^ 1;
            let v = half[h].to;
            let list = &out[v];
            let idx = list.iter().position(|&x| x == twin).expect("twin leaves v");
            half[h].next = list[(idx + list.len() - 1) % list.len()];
        }
        let mut cycles = Vec::new();
        for h0 in 0..half.len() {
            if half[h0].cycle != usize::MAX {
                continue;
            }
            let c = cycles.len();
            let mut hs = Vec::new();
            let mut h = h0;
            loop {
                half[h].cycle = c;
                hs.push(h);
                h = half[h].next;
                if h == h0 {
                    break;
                }
            }
            let ring: Vec<Point> = hs.iter().map(|&h| verts[half[h].from]).collect();
            cycles.push(Cycle {
                half_edges: hs,
                area: signed_area(&ring),
            });
        }
        let area_eps = tol * tol * 1e3;
        let mut arr = Arrangement {
            verts,
            labels,
            half,
            cycles,
            faces: vec![],
            unbounded: vec![],
            tol,
        };
        let mut face_of_cycle = BTreeMap::new();
        for c in 0..arr.cycles.len() {
            if arr.cycles[c].area > area_eps {
                let probe = arr.probe(c);
                let free = probe.is_some_and(&is_free);
                face_of_cycle.insert(c, arr.faces.len());
                arr.faces.push(Face {
                    outer: c,
                    holes: vec![],
                    free,
                    area: arr.cycles[c].area,
                });
            }
        }
        for c in 0..arr.cycles.len() {
            if arr.cycles[c].area > area_eps {
                continue;
            }
            let Some(probe) = arr.probe(c) else { continue };
            let mut best: Option<(f64, usize)> = None;
            for (&oc, &f) in &face_of_cycle {
                if oc == c {
                    continue;
                }
                let area = arr.cycles[oc].area;
                if best.is_some_and(|(a, _)| a <= area) {
                    continue;
                }
                if point_in_ring(probe, &arr.ring(oc)) {
                    best = Some((area, f));
                }
            }
            match best {
                Some((_, f)) => arr.faces[f].holes.push(c),
                None => arr.unbounded.push(c),
            }
        }
        arr
    }

    /// A point slightly to the left of the cycle's longest edge.
    fn probe(&self, c: usize) -> Option<Point> {
        let h = *self.cycles[c]
            .half_edges
            .iter()
            .max_by(|&&a, &&b| self.half_len(a).total_cmp(&self.half_len(b)))?;
        let (a, b) = (self.verts[self.half[h].from], self.verts[self.half[h].to]);
        let len = a.dist(b);
        if len <= self.tol {
            return None;
        }
        let n = (b - a).perp() * (1.0 / len);
        let delta = (self.tol * 1e3).min(len * 1e-3);
        Some(a.lerp(b, 0.5) + n * delta)
    }

    fn half_len(&self, h: usize) -> f64 {
        self.verts[self.half[h].from].dist(self.verts[self.half[h].to])
    }

    fn ring(&self, c: usize) -> Vec<Point> {
        self.cycles[c]
            .half_edges
            .iter()
            .map(|&h| self.verts[self.half[h].from])
            .collect()
    }

    pub fn vertices(&self) -> &[Point] {
        &self.verts
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn cycles(&self) -> &[Cycle] {
        &self.cycles
    }

    /// The face strictly containing `p`, smallest area first.
    pub fn face_at(&self, p: Point) -> Option<usize> {
        let mut best: Option<(f64, usize)> = None;
        for (f, face) in self.faces.iter().enumerate() {
            if best.is_some_and(|(a, _)| a <= face.area) {
                continue;
            }
            if !point_in_ring(p, &self.ring(face.outer)) {
                continue;
            }
            if face.holes.iter().any(|&h| point_in_ring(p, &self.ring(h))) {
                continue;
            }
            best = Some((face.area, f));
        }
        best.map(|(_, f)| f)
    }

    pub fn near_edge(&self, p: Point, dist: f64) -> bool {
        self.half
            .iter()
            .step_by(2)
            .any(|h| point_segment_distance(p, self.verts[h.from], self.verts[h.to]) <= dist)
    }

    /// Free face containing `p`. Points on an arrangement edge are nudged
    /// into an adjacent free face.
    pub fn free_face_at(&self, p: Point) -> Option<usize> {
        let probe_dist = self.tol * 1e3;
        if !self.near_edge(p, self.tol * 10.0) {
            return self.face_at(p).filter(|&f| self.faces[f].free);
        }
        for k in 0..16 {
            let a = std::f64::consts::TAU * (k as f64 + 0.37) / 16.0;
            let q = p + Point::new(a.cos(), a.sin()) * probe_dist;
            if self.near_edge(q, self.tol * 10.0) {
                continue;
            }
            if let Some(f) = self.face_at(q).filter(|&f| self.faces[f].free) {
                return Some(f);
            }
        }
        None
    }

    fn cycle_loop(&self, c: usize) -> BoundaryLoop {
        let hs = &self.cycles[c].half_edges;
        BoundaryLoop {
            points: hs.iter().map(|&h| self.verts[self.half[h].from]).collect(),
            ids: hs.iter().map(|&h| self.half[h].from as VertexId).collect(),
            labels: hs
                .iter()
                .map(|&h| self.labels[self.half[h].edge].clone())
                .collect(),
        }
    }

    pub fn face_loops(&self, f: usize) -> Vec<BoundaryLoop> {
        let face = &self.faces[f];
        std::iter::once(face.outer)
            .chain(face.holes.iter().copied())
            .map(|c| self.cycle_loop(c))
            .collect()
    }

    pub fn face_region(&self, f: usize) -> Region {
        Region::from_loops(self.face_loops(f), self.tol)
    }
}

/// Segments of an environment boundary, outer polygon first.
pub fn environment_segments(env: &crate::environment::Environment) -> Vec<LabeledSegment> {
    let mut out: Vec<LabeledSegment> = env
        .outer
        .edges()
        .map(|(a, b)| LabeledSegment {
            a,
            b,
            label: EdgeLabel::Outer,
        })
        .collect();
    for (i, obs) in env.obstacles.iter().enumerate() {
        out.extend(obs.edges().map(|(a, b)| LabeledSegment {
            a,
            b,
            label: EdgeLabel::Obstacle(i),
        }));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::environment::Environment;
    use crate::geom::Containment;

    fn free_in(env: &Environment) -> impl Fn(Point) -> bool + '_ {
        let r = Region::from_environment(env);
        move |p| r.contains(p) == Containment::Inside
    }

    #[test]
    fn environment_alone_has_one_free_face_with_a_hole() {
        let env = Environment::env1();
        let arr = Arrangement::build(&environment_segments(&env), 1e-8, free_in(&env));
        let free: Vec<_> = arr.faces().iter().filter(|f| f.free).collect();
        assert_eq!(free.len(), 1);
        assert_eq!(free[0].holes.len(), 1);
        assert!((free[0].area - 100.0).abs() < 1e-9);
        let f = arr.free_face_at(Point::new(1., 1.)).unwrap();
        let loops = arr.face_loops(f);
        assert_eq!(loops[0].ids, vec![0, 1, 2, 3]);
    }

    #[test]
    fn wall_splits_square() {
        let env = Environment::env0();
        let mut segs = environment_segments(&env);
        segs.push(LabeledSegment {
            a: Point::new(5., 0.),
            b: Point::new(5., 10.),
            label: EdgeLabel::Wall(0),
        });
        let arr = Arrangement::build(&segs, 1e-8, free_in(&env));
        let left = arr.free_face_at(Point::new(1., 5.)).unwrap();
        let right = arr.free_face_at(Point::new(9., 5.)).unwrap();
        assert_ne!(left, right);
        assert!((arr.faces()[left].area - 50.0).abs() < 1e-9);
        // A point on the wall lands in one of the halves.
        assert!(arr.free_face_at(Point::new(5., 5.)).is_some());
    }

    #[test]
    fn wall_touching_obstacle_makes_pinch() {
        let env = Environment::env1();
        let mut segs = environment_segments(&env);
        // (0,0) -> (6,4) -> (10,10), the shortest corner path.
        for (a, b) in [([0., 0.], [6., 4.]), ([6., 4.], [10., 10.])] {
            segs.push(LabeledSegment {
                a: a.into(),
                b: b.into(),
                label: EdgeLabel::Wall(1),
            });
        }
        let arr = Arrangement::build(&segs, 1e-8, free_in(&env));
        let f = arr.free_face_at(Point::new(1., 9.)).unwrap();
        let loops = arr.face_loops(f);
        // Obstacle is attached to the wall, so the face has no holes.
        assert_eq!(loops.len(), 1);
        let pinch = loops[0]
            .points
            .iter()
            .filter(|p| **p == Point::new(6., 4.))
            .count();
        assert_eq!(pinch, 2);
        let region = Region::from_loops(loops, 1e-8);
        assert!(region.contains(Point::new(5., 5.)) == Containment::Outside);
        let g = arr.free_face_at(Point::new(9., 1.)).unwrap();
        assert_ne!(f, g);
        assert!(arr.face_loops(g).len() == 1);
    }
}
