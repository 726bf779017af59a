//! Homotopy classes of paths via crossing words.
//!
//! Each obstacle gets a ray from an interior reference point. Recording the
//! signed ray crossings of a path gives a word in the free group on the
//! obstacles; after free reduction it identifies the homotopy class of the
//! path relative to its endpoints (for paths with common endpoints).

use serde::{Deserialize, Serialize};

use crate::environment::Environment;
use crate::geom::{point_in_ring, Point, Polygon, Polyline};

/// A reduced word of `(obstacle, ±1)` letters.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct HomotopySignature(pub Vec<(usize, i8)>);

impl HomotopySignature {
    pub fn from_letters(letters: impl IntoIterator<Item = (usize, i8)>) -> Self {
        let mut out: Vec<(usize, i8)> = Vec::new();
        for l in letters {
            match out.last() {
                Some(&(o, s)) if o == l.0 && s == -l.1 => {
                    out.pop();
                }
                _ => out.push(l),
            }
        }
        HomotopySignature(out)
    }

    pub fn is_trivial(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Self {
        HomotopySignature(self.0.iter().rev().map(|&(o, s)| (o, -s)).collect())
    }

    pub fn concat(&self, other: &Self) -> Self {
        HomotopySignature::from_letters(self.0.iter().chain(other.0.iter()).copied())
    }
}

#[derive(Debug, Clone, PartialEq)]
struct Ray {
    obstacle: usize,
    origin: Point,
}

/// Parallel rays, one per tracked obstacle.
#[derive(Debug, Clone, PartialEq)]
pub struct RaySystem {
    rays: Vec<Ray>,
    dir: Point,
}

/// A point strictly inside a simple polygon.
pub fn interior_point(poly: &Polygon) -> Point {
    let c = poly.centroid();
    let v = poly.vertices();
    if point_in_ring(c, v) {
        return c;
    }
    let n = v.len();
    for i in 0..n {
        let (a, b, d) = (v[(i + n - 1) % n], v[i], v[(i + 1) % n]);
        for w in [0.5, 0.25, 0.1, 0.01] {
            let q = (a + b + d) * (1.0 / 3.0);
            let q = b.lerp(q, w);
            if point_in_ring(q, v) {
                return q;
            }
        }
    }
    c
}

impl RaySystem {
    /// Rays for the given obstacles. The common direction starts upward and
    /// rotates deterministically until no ray passes near any of `avoid` or
    /// another ray's origin.
    pub fn new(env: &Environment, obstacles: &[usize], avoid: &[Point]) -> RaySystem {
        let rays: Vec<Ray> = obstacles
            .iter()
            .map(|&o| Ray {
                obstacle: o,
                origin: interior_point(&env.obstacles[o]),
            })
            .collect();
        let margin = env.euclidean_diameter() * 1e-6;
        let clearance = |dir: Point| -> f64 {
            let mut m = f64::INFINITY;
            for r in &rays {
                let pts = avoid.iter().copied().chain(
                    rays.iter()
                        .filter(|q| q.obstacle != r.obstacle)
                        .map(|q| q.origin),
                );
                for p in pts {
                    let rel = p - r.origin;
                    if rel.dot(dir) > -margin {
                        m = m.min(dir.cross(rel).abs());
                    }
                }
            }
            m
        };
        let mut best = (f64::NEG_INFINITY, Point::new(0.0, 1.0));
        for k in 0..64 {
            let a = std::f64::consts::FRAC_PI_2 + k as f64 * 0.618_033_988_749_895;
            let dir = Point::new(a.cos(), a.sin());
            let c = clearance(dir);
            if c > margin {
                best = (c, dir);
                break;
            }
            if c > best.0 {
                best = (c, dir);
            }
        }
        RaySystem { rays, dir: best.1 }
    }

    pub fn direction(&self) -> Point {
        self.dir
    }

    pub fn obstacles(&self) -> impl Iterator<Item = usize> + '_ {
        self.rays.iter().map(|r| r.obstacle)
    }

    /// Crossing letters of the segment `p -> q`, ordered along it.
    pub fn segment_letters(&self, p: Point, q: Point) -> Vec<(usize, i8)> {
        let mut hits: Vec<(f64, usize, i8)> = Vec::new();
        for r in &self.rays {
            let sp = self.dir.cross(p - r.origin);
            let sq = self.dir.cross(q - r.origin);
            let lp = sp > 0.0;
            let lq = sq > 0.0;
            if lp == lq {
                continue;
            }
            let lam = sp / (sp - sq);
            let x = p.lerp(q, lam);
            if self.dir.dot(x - r.origin) <= 0.0 {
                continue;
            }
            hits.push((lam, r.obstacle, if lp { 1 } else { -1 }));
        }
        hits.sort_by(|a, b| a.0.total_cmp(&b.0));
        hits.into_iter().map(|(_, o, s)| (o, s)).collect()
    }

    pub fn letters(&self, points: &[Point]) -> Vec<(usize, i8)> {
        points
            .windows(2)
            .flat_map(|w| self.segment_letters(w[0], w[1]))
            .collect()
    }

    pub fn signature(&self, path: &Polyline) -> HomotopySignature {
        HomotopySignature::from_letters(self.letters(path.vertices()))
    }

    pub fn signature_of_points(&self, points: &[Point]) -> HomotopySignature {
        HomotopySignature::from_letters(self.letters(points))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction_cancels_inverse_pairs() {
        let w = HomotopySignature::from_letters([(0, 1), (1, 1), (1, -1), (0, -1), (2, 1)]);
        assert_eq!(w.0, vec![(2, 1)]);
        assert!(w.concat(&w.inverse()).is_trivial());
    }

    #[test]
    fn two_sides_of_an_obstacle_differ() {
        let env = Environment::env1();
        let rays = RaySystem::new(&env, &[0], env.outer.vertices());
        let below = rays.signature_of_points(&[
            Point::new(0., 0.),
            Point::new(6., 4.),
            Point::new(10., 10.),
        ]);
        let above = rays.signature_of_points(&[
            Point::new(0., 0.),
            Point::new(4., 6.),
            Point::new(10., 10.),
        ]);
        assert_ne!(below, above);
        let around: Vec<Point> = [(0., 0.), (6., 4.), (10., 10.), (4., 6.), (0., 0.)]
            .iter()
            .map(|&(x, y)| Point::new(x, y))
            .collect();
        assert_eq!(rays.signature_of_points(&around).len(), 1);
    }

    #[test]
    fn nonconvex_obstacle_gets_an_interior_origin() {
        let u = Polygon::new(vec![
            Point::new(0., 0.),
            Point::new(3., 0.),
            Point::new(3., 3.),
            Point::new(2., 3.),
            Point::new(2., 1.),
            Point::new(1., 1.),
            Point::new(1., 3.),
            Point::new(0., 3.),
        ])
        .unwrap();
        let p = interior_point(&u);
        assert!(point_in_ring(p, u.vertices()));
    }
}
