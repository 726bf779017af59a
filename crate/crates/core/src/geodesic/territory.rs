//! Evader territories: the free face of the arrangement that contains the evader.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::environment::Environment;
use crate::geom::{Containment, Point, Polyline};

use super::arrangement::{environment_segments, Arrangement, LabeledSegment};
use super::homotopy::{HomotopySignature, RaySystem};
use super::region::{EdgeLabel, Region, VertexId};
use super::GeodesicError;

/// A guarded shortest path acting as a boundary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Wall {
    pub id: u32,
    pub path: Polyline,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RegionType {
    /// No walls yet and at least one obstacle.
    Unguarded,
    Zero,
    One,
    OnePrime,
    Two,
    Three,
    /// Boundary pattern outside the five standard types.
    Irregular,
}

impl std::fmt::Display for RegionType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            RegionType::Unguarded => "unguarded",
            RegionType::Zero => "0",
            RegionType::One => "1",
            RegionType::OnePrime => "1'",
            RegionType::Two => "2",
            RegionType::Three => "3",
            RegionType::Irregular => "irregular",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ArcKind {
    Wall(u32),
    Boundary,
}

/// A maximal run of the outer boundary loop with one kind.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryArc {
    pub kind: ArcKind,
    pub points: Vec<Point>,
    pub obstacles: Vec<usize>,
}

impl BoundaryArc {
    pub fn start(&self) -> Point {
        self.points[0]
    }

    pub fn end(&self) -> Point {
        *self.points.last().unwrap()
    }

    pub fn polyline(&self) -> Polyline {
        Polyline::new(self.points.clone()).unwrap_or_else(|_| Polyline::degenerate(self.points[0]))
    }
}

/// Named boundary points of a territory.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Anchors {
    pub u: Option<Point>,
    pub v: Option<Point>,
    pub w: Option<Point>,
    pub x: Option<Point>,
}

/// A shortest path together with its bend vertices and homotopy word.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeodesicPath {
    pub line: Polyline,
    pub vertex_ids: Vec<VertexId>,
    pub length: f64,
    pub signature: HomotopySignature,
}

impl GeodesicPath {
    pub fn start(&self) -> Point {
        self.line.start()
    }

    pub fn end(&self) -> Point {
        self.line.end()
    }
}

#[derive(Debug, Clone, Copy)]
pub enum FaceChoice {
    Containing(Point),
    /// Largest free face touching the obstacle.
    AttachedTo(usize),
    /// Largest free face inside the given territory.
    LargestWithin,
}

#[derive(Debug, Clone)]
pub struct Territory {
    env: Arc<Environment>,
    domain: Arc<Region>,
    region: Arc<Region>,
    /// Path metric of the closed territory; differs from `region` only at pinch points.
    metric: Arc<Region>,
    walls: Vec<Wall>,
    holes: Vec<usize>,
    attached: Vec<(usize, u32)>,
    boundary_obstacles: Vec<usize>,
    arcs: Vec<BoundaryArc>,
    kind: RegionType,
    anchors: Anchors,
    deltas: Vec<Polyline>,
    rays: Arc<RaySystem>,
}

/// Outcome of cutting a territory with a new wall.
#[derive(Debug, Clone)]
pub struct Cut {
    pub territory: Territory,
    pub removed: Vec<usize>,
    pub released: Vec<u32>,
}

/// Point at half the perimeter of the outer boundary, measured from vertex 0.
pub fn half_perimeter_point(env: &Environment) -> Point {
    let b = env.outer.boundary();
    b.point_at_clamped(0.5 * b.length())
}

impl Territory {
    /// The whole free space, no walls.
    pub fn whole(env: Arc<Environment>) -> Territory {
        let domain = Arc::new(Region::from_environment(&env));
        Territory::whole_with_domain(env, domain)
    }

    pub fn whole_with_domain(env: Arc<Environment>, domain: Arc<Region>) -> Territory {
        let holes: Vec<usize> = (0..env.k()).collect();
        let avoid: Vec<Point> = domain
            .loops()
            .iter()
            .flat_map(|l| l.points.iter().copied())
            .collect();
        let rays = Arc::new(RaySystem::new(&env, &holes, &avoid));
        let mut pts = env.outer.vertices().to_vec();
        pts.push(pts[0]);
        let arcs = vec![BoundaryArc {
            kind: ArcKind::Boundary,
            points: pts,
            obstacles: vec![],
        }];
        let kind = if holes.is_empty() {
            RegionType::Zero
        } else {
            RegionType::Unguarded
        };
        let anchors = Anchors {
            u: Some(env.outer.vertices()[0]),
            v: Some(half_perimeter_point(&env)),
            w: None,
            x: None,
        };
        Territory {
            region: domain.clone(),
            metric: domain.clone(),
            domain,
            env,
            walls: vec![],
            holes,
            attached: vec![],
            boundary_obstacles: vec![],
            arcs,
            kind,
            anchors,
            deltas: vec![],
            rays,
        }
    }

    /// Territory bounded by the environment, the given walls and snip segments.
    pub fn from_walls(
        env: Arc<Environment>,
        domain: Arc<Region>,
        walls: Vec<Wall>,
        snips: &[(Point, Point)],
        choice: FaceChoice,
        within: Option<&Region>,
    ) -> Result<Territory, GeodesicError> {
        let tol = domain.tol();
        let mut segs = environment_segments(&env);
        for w in &walls {
            for (a, b) in w.path.segments() {
                segs.push(LabeledSegment {
                    a,
                    b,
                    label: EdgeLabel::Wall(w.id),
                });
            }
        }
        for &(a, b) in snips {
            segs.push(LabeledSegment {
                a,
                b,
                label: EdgeLabel::Snip,
            });
        }
        let arr = Arrangement::build(&segs, tol, |p| domain.contains(p) == Containment::Inside);
        let face = match choice {
            FaceChoice::Containing(p) => arr.free_face_at(p),
            FaceChoice::AttachedTo(o) => largest_face(&arr, |f| {
                arr.face_loops(f).iter().any(|l| {
                    l.labels
                        .iter()
                        .flatten()
                        .any(|&x| x == EdgeLabel::Obstacle(o))
                })
            }),
            FaceChoice::LargestWithin => largest_face(&arr, |f| {
                let Some(r) = within else { return true };
                let loops = arr.face_loops(f);
                let lp = &loops[0];
                // Sample a point just inside the face next to its longest edge.
                let (a, b) = (0..lp.len())
                    .map(|i| lp.edge(i))
                    .max_by(|x, y| x.0.dist(x.1).total_cmp(&y.0.dist(y.1)))
                    .unwrap();
                let len = a.dist(b);
                let q = a.lerp(b, 0.5) + (b - a).perp() * ((tol * 1e3).min(len * 1e-3) / len);
                r.contains(q) == Containment::Inside
            }),
        }
        .ok_or(GeodesicError::NoFace)?;
        let loops = arr.face_loops(face);
        let region = Arc::new(Region::from_loops(loops, tol));
        Ok(Territory::classify(env, domain, region, walls))
    }

    fn classify(
        env: Arc<Environment>,
        domain: Arc<Region>,
        region: Arc<Region>,
        walls: Vec<Wall>,
    ) -> Territory {
        let tol = region.tol();
        let loops = region.loops();
        let mut holes = BTreeSet::new();
        for l in &loops[1..] {
            for lab in l.labels.iter().flatten() {
                if let EdgeLabel::Obstacle(o) = lab {
                    holes.insert(*o);
                }
            }
        }
        let outer = &loops[0];
        let n = outer.len();
        let blocked = |labels: &[EdgeLabel]| {
            labels
                .iter()
                .any(|l| l.is_domain() || *l == EdgeLabel::Snip)
        };
        let wall_ids = |labels: &[EdgeLabel]| -> Vec<u32> {
            labels
                .iter()
                .filter_map(|l| {
                    if let EdgeLabel::Wall(w) = l {
                        Some(*w)
                    } else {
                        None
                    }
                })
                .collect()
        };
        let mut kept = BTreeSet::new();
        for labels in &outer.labels {
            let ids = wall_ids(labels);
            if !blocked(labels) && ids.len() == 1 {
                kept.insert(ids[0]);
            }
        }
        for labels in &outer.labels {
            let ids = wall_ids(labels);
            if !blocked(labels) && !ids.is_empty() && !ids.iter().any(|w| kept.contains(w)) {
                kept.insert(*ids.iter().max().unwrap());
            }
        }
        let kinds: Vec<ArcKind> = outer
            .labels
            .iter()
            .map(|labels| {
                if blocked(labels) {
                    ArcKind::Boundary
                } else {
                    let ids = wall_ids(labels);
                    ids.iter()
                        .rev()
                        .find(|w| kept.contains(w))
                        .map_or(ArcKind::Boundary, |&w| ArcKind::Wall(w))
                }
            })
            .collect();
        let edge_obstacles = |i: usize| -> Vec<usize> {
            outer.labels[i]
                .iter()
                .filter_map(|l| {
                    if let EdgeLabel::Obstacle(o) = l {
                        Some(*o)
                    } else {
                        None
                    }
                })
                .collect()
        };
        let start = (0..n)
            .find(|&i| kinds[i] != kinds[(i + n - 1) % n])
            .unwrap_or(0);
        let mut arcs: Vec<BoundaryArc> = Vec::new();
        for step in 0..n {
            let i = (start + step) % n;
            let (a, b) = outer.edge(i);
            let obs = edge_obstacles(i);
            match arcs.last_mut() {
                Some(arc) if arc.kind == kinds[i] => {
                    arc.points.push(b);
                    for o in obs {
                        if !arc.obstacles.contains(&o) {
                            arc.obstacles.push(o);
                        }
                    }
                }
                _ => arcs.push(BoundaryArc {
                    kind: kinds[i],
                    points: vec![a, b],
                    obstacles: obs,
                }),
            }
        }
        // Drop boundary excursions: detours around an obstacle that hangs
        // off a single wall, or that start and end at the same point.
        let mut attached: Vec<(usize, u32)> = Vec::new();
        loop {
            let m = arcs.len();
            if m <= 2 {
                break;
            }
            // Closed loops first, then runs touching only obstacles, then the shortest.
            let pick = (0..m)
                .filter(|&r| {
                    let arc = &arcs[r];
                    if arc.kind != ArcKind::Boundary {
                        return false;
                    }
                    let prev = arcs[(r + m - 1) % m].kind;
                    let next = arcs[(r + 1) % m].kind;
                    (prev == next && matches!(prev, ArcKind::Wall(_)))
                        || arc.start().dist(arc.end()) <= tol
                })
                .min_by(|&a, &b| {
                    let key = |r: usize| {
                        let arc = &arcs[r];
                        (arc.start().dist(arc.end()) > tol, arc.obstacles.is_empty())
                    };
                    key(a).cmp(&key(b)).then(
                        arcs[a]
                            .polyline()
                            .length()
                            .total_cmp(&arcs[b].polyline().length()),
                    )
                });
            let Some(r) = pick else { break };
            let arc = arcs.remove(r);
            let m = arcs.len();
            let pi = (r + m - 1) % m;
            let host = match arcs[pi].kind {
                ArcKind::Wall(w) => w,
                ArcKind::Boundary => u32::MAX,
            };
            for &o in &arc.obstacles {
                attached.push((o, host));
            }
            let ni = r % m;
            if pi != ni && arcs[pi].kind == arcs[ni].kind {
                let next = arcs.remove(ni);
                let pi = if ni < pi { pi - 1 } else { pi };
                let prev = &mut arcs[pi];
                prev.points.extend_from_slice(&arc.points[1..]);
                prev.points.extend_from_slice(&next.points[1..]);
                for o in arc.obstacles.iter().chain(next.obstacles.iter()) {
                    if !prev.obstacles.contains(o) {
                        prev.obstacles.push(*o);
                    }
                }
            } else {
                arcs[pi].points.extend_from_slice(&arc.points[1..]);
            }
        }
        let mut boundary_obstacles = BTreeSet::new();
        for arc in &arcs {
            if arc.kind == ArcKind::Boundary {
                boundary_obstacles.extend(arc.obstacles.iter().copied());
            }
        }
        attached.retain(|(o, _)| !boundary_obstacles.contains(o) && !holes.contains(o));
        attached.sort();
        attached.dedup_by_key(|x| x.0);
        let holes: Vec<usize> = holes.into_iter().collect();
        let walls: Vec<Wall> = walls.into_iter().filter(|w| kept.contains(&w.id)).collect();

        let wall_count = arcs
            .iter()
            .filter(|a| matches!(a.kind, ArcKind::Wall(_)))
            .count();
        let mut anchors = Anchors::default();
        let mut deltas = Vec::new();
        let kind;
        if holes.is_empty() {
            kind = RegionType::Zero;
            let i = (0..n).min_by_key(|&i| (outer.ids[i], i)).unwrap();
            anchors.u = Some(outer.points[i]);
        } else if wall_count == 0 {
            kind = RegionType::Unguarded;
            anchors.u = Some(outer.points[0]);
        } else {
            let m = arcs.len();
            let is_wall = |k: ArcKind| matches!(k, ArcKind::Wall(_));
            // Rotate so the sequence starts with a wall that follows a boundary arc
            // (or any wall when there is no boundary arc).
            let rot = (0..m)
                .find(|&i| is_wall(arcs[i].kind) && !is_wall(arcs[(i + m - 1) % m].kind))
                .or_else(|| (0..m).find(|&i| is_wall(arcs[i].kind)))
                .unwrap();
            arcs.rotate_left(rot);
            let pattern: Vec<bool> = arcs.iter().map(|a| is_wall(a.kind)).collect();
            match pattern.as_slice() {
                [true, false] => {
                    kind = RegionType::OnePrime;
                    anchors.u = Some(arcs[0].start());
                    anchors.v = Some(arcs[0].end());
                    deltas.push(arcs[1].polyline());
                }
                [true, true, false] => {
                    kind = RegionType::One;
                    anchors.u = Some(arcs[0].end());
                    anchors.v = Some(arcs[0].start());
                    anchors.w = Some(arcs[1].end());
                    deltas.push(arcs[2].polyline());
                }
                [true, true] => {
                    kind = RegionType::Two;
                    anchors.u = Some(arcs[0].start());
                    anchors.v = Some(arcs[0].end());
                }
                [true, false, true, false] if arcs[0].kind != arcs[2].kind => {
                    kind = RegionType::Three;
                    anchors.u = Some(arcs[0].start());
                    anchors.v = Some(arcs[0].end());
                    anchors.w = Some(arcs[2].start());
                    anchors.x = Some(arcs[2].end());
                    deltas.push(arcs[1].polyline());
                    deltas.push(arcs[3].polyline());
                }
                _ => {
                    kind = RegionType::Irregular;
                    anchors.u = Some(arcs[0].start());
                    if let Some(b) = arcs
                        .iter()
                        .filter(|a| !is_wall(a.kind))
                        .max_by(|a, b| a.polyline().length().total_cmp(&b.polyline().length()))
                    {
                        deltas.push(b.polyline());
                    }
                }
            }
        }
        let avoid: Vec<Point> = region
            .loops()
            .iter()
            .flat_map(|l| l.points.iter().copied())
            .collect();
        let rays = Arc::new(RaySystem::new(&env, &holes, &avoid));
        // Wall segments the closed territory still contains, including those
        // glued to an obstacle edge on the territory side.
        let face_obstacles: BTreeSet<usize> = loops
            .iter()
            .flat_map(|l| l.labels.iter().flatten())
            .filter_map(|l| {
                if let EdgeLabel::Obstacle(o) = l {
                    Some(*o)
                } else {
                    None
                }
            })
            .collect();
        let bridges: Vec<(Point, Point)> = walls
            .iter()
            .flat_map(|w| w.path.segments())
            .filter(|&(a, b)| {
                let len = a.dist(b);
                if len <= tol {
                    return false;
                }
                let off = (b - a).perp() * ((1e3 * tol).min(1e-3 * len) / len);
                let m = a.lerp(b, 0.5);
                [m + off, m - off].iter().any(|&q| {
                    region.contains(q) == Containment::Inside
                        || face_obstacles
                            .iter()
                            .any(|&o| env.obstacles[o].contains(q, tol) == Containment::Inside)
                })
            })
            .collect();
        let metric = if region.has_pinches() || !bridges.is_empty() {
            Arc::new(region.closure(&bridges))
        } else {
            region.clone()
        };
        Territory {
            env,
            domain,
            region,
            metric,
            walls,
            holes,
            attached,
            boundary_obstacles: boundary_obstacles.into_iter().collect(),
            arcs,
            kind,
            anchors,
            deltas,
            rays,
        }
    }

    pub fn env(&self) -> &Arc<Environment> {
        &self.env
    }

    pub fn domain(&self) -> &Arc<Region> {
        &self.domain
    }

    /// The open territory; pinch points are impassable.
    pub fn region(&self) -> &Arc<Region> {
        &self.region
    }

    /// Metric used for planning paths, where pinch points can be crossed.
    pub fn metric(&self) -> &Arc<Region> {
        &self.metric
    }

    pub fn walls(&self) -> &[Wall] {
        &self.walls
    }

    /// Obstacles strictly inside the territory.
    pub fn holes(&self) -> &[usize] {
        &self.holes
    }

    /// Obstacles hanging off a wall, with the wall id.
    pub fn attached(&self) -> &[(usize, u32)] {
        &self.attached
    }

    pub fn boundary_obstacles(&self) -> &[usize] {
        &self.boundary_obstacles
    }

    pub fn arcs(&self) -> &[BoundaryArc] {
        &self.arcs
    }

    pub fn region_type(&self) -> RegionType {
        self.kind
    }

    pub fn anchors(&self) -> Anchors {
        self.anchors
    }

    /// Boundary arcs named by the type: Δ for types 1 and 1', Δ1 and Δ2 for type 3.
    pub fn deltas(&self) -> &[Polyline] {
        &self.deltas
    }

    pub fn rays(&self) -> &RaySystem {
        &self.rays
    }

    pub fn contains(&self, p: Point) -> bool {
        self.region.contains(p) != Containment::Outside
    }

    pub fn signature(&self, line: &Polyline) -> HomotopySignature {
        self.rays.signature(line)
    }

    pub fn shortest_path(&self, a: Point, b: Point) -> Result<GeodesicPath, GeodesicError> {
        let sp = self
            .metric
            .shortest_path(a, b)
            .ok_or(GeodesicError::NoPath(a, b))?;
        let signature = self.rays.signature(&sp.line);
        Ok(GeodesicPath {
            line: sp.line,
            vertex_ids: sp.vertex_ids,
            length: sp.length,
            signature,
        })
    }

    pub fn distance(&self, a: Point, b: Point) -> f64 {
        self.metric.distance(a, b)
    }

    /// Rebuilds with the current walls plus `walls`, choosing a face.
    pub fn refine(
        &self,
        extra: Vec<Wall>,
        snips: &[(Point, Point)],
        choice: FaceChoice,
    ) -> Result<Territory, GeodesicError> {
        let mut walls = self.walls.clone();
        walls.extend(extra);
        Territory::from_walls(
            self.env.clone(),
            self.domain.clone(),
            walls,
            snips,
            choice,
            Some(&self.region),
        )
    }

    /// Adds a wall and keeps the face containing the evader.
    pub fn cut(&self, wall: Wall, evader: Point) -> Result<Cut, GeodesicError> {
        let new_id = wall.id;
        let t = self.refine(vec![wall], &[], FaceChoice::Containing(evader))?;
        let before: BTreeSet<usize> = self
            .holes
            .iter()
            .copied()
            .chain(self.attached.iter().map(|a| a.0))
            .collect();
        let after: BTreeSet<usize> = t
            .holes
            .iter()
            .copied()
            .chain(t.attached.iter().map(|a| a.0))
            .collect();
        let removed = before.difference(&after).copied().collect();
        let kept: BTreeSet<u32> = t.walls.iter().map(|w| w.id).collect();
        let released = self
            .walls
            .iter()
            .map(|w| w.id)
            .chain(std::iter::once(new_id))
            .filter(|id| !kept.contains(id))
            .collect();
        Ok(Cut {
            territory: t,
            removed,
            released,
        })
    }
}

fn largest_face(arr: &Arrangement, pred: impl Fn(usize) -> bool) -> Option<usize> {
    let mut best: Option<(f64, usize)> = None;
    for (f, face) in arr.faces().iter().enumerate() {
        if !face.free || best.is_some_and(|(a, _)| a >= face.area) {
            continue;
        }
        if pred(f) {
            best = Some((face.area, f));
        }
    }
    best.map(|(_, f)| f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn env1() -> Arc<Environment> {
        Arc::new(Environment::env1())
    }

    fn wall(id: u32, pts: &[(f64, f64)]) -> Wall {
        Wall {
            id,
            path: Polyline::new(pts.iter().map(|&(x, y)| Point::new(x, y)).collect()).unwrap(),
        }
    }

    #[test]
    fn whole_environment_is_unguarded() {
        let t = Territory::whole(env1());
        assert_eq!(t.region_type(), RegionType::Unguarded);
        assert_eq!(t.holes(), &[0]);
        assert_eq!(t.anchors().v, Some(Point::new(10., 10.)));
    }

    #[test]
    fn empty_square_is_type_zero() {
        let t = Territory::whole(Arc::new(Environment::env0()));
        assert_eq!(t.region_type(), RegionType::Zero);
    }

    #[test]
    fn touched_obstacle_becomes_attached() {
        let t = Territory::whole(env1());
        let cut = t
            .cut(
                wall(0, &[(0., 0.), (6., 4.), (10., 10.)]),
                Point::new(1., 9.),
            )
            .unwrap();
        let t1 = cut.territory;
        assert_eq!(t1.region_type(), RegionType::Zero);
        assert_eq!(t1.attached(), &[(0, 0)]);
        assert!(cut.removed.is_empty());
        assert_eq!(t1.walls().len(), 1);
    }

    #[test]
    fn untouched_obstacle_on_far_side_is_removed() {
        let t = Territory::whole(env1());
        let cut = t
            .cut(
                wall(0, &[(0., 0.), (6., 4.), (10., 10.)]),
                Point::new(9., 1.),
            )
            .unwrap();
        assert_eq!(cut.territory.region_type(), RegionType::Zero);
        assert_eq!(cut.removed, vec![0]);
    }

    #[test]
    fn wall_missing_the_obstacle_gives_type_one_prime() {
        let t = Territory::whole(env1());
        let cut = t
            .cut(wall(0, &[(0., 0.), (10., 2.)]), Point::new(5., 8.))
            .unwrap();
        let t1 = cut.territory;
        assert_eq!(t1.region_type(), RegionType::OnePrime);
        assert_eq!(t1.holes(), &[0]);
        let a = t1.anchors();
        assert_eq!(a.u, Some(Point::new(0., 0.)));
        assert_eq!(a.v, Some(Point::new(10., 2.)));
        assert_eq!(t1.deltas()[0].start(), Point::new(10., 2.));
        assert_eq!(t1.deltas()[0].end(), Point::new(0., 0.));
    }

    #[test]
    fn two_walls_sharing_both_ends_give_type_two() {
        let t = Territory::whole(env1());
        let t = t
            .cut(wall(0, &[(0., 0.), (10., 2.)]), Point::new(5., 8.))
            .unwrap()
            .territory;
        let cut = t
            .cut(
                wall(1, &[(0., 0.), (2., 9.), (9., 9.), (10., 2.)]),
                Point::new(5., 5.) + Point::new(2., -2.),
            )
            .unwrap();
        assert_eq!(cut.territory.region_type(), RegionType::Two);
        assert!(cut.released.is_empty());
    }

    #[test]
    fn walls_without_common_ends_give_type_three() {
        let t = Territory::whole(env1());
        let t = t
            .cut(
                wall(0, &[(0., 2.), (2., 0.)]),
                Point::new(5., 5.) + Point::new(0., -3.),
            )
            .unwrap()
            .territory;
        let cut = t
            .cut(wall(1, &[(8., 10.), (10., 8.)]), Point::new(2., 5.))
            .unwrap();
        let t2 = cut.territory;
        assert_eq!(t2.region_type(), RegionType::Three);
        assert_eq!(t2.deltas().len(), 2);
    }
}
