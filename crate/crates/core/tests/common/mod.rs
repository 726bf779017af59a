//! Independent oracles shared by the integration tests.

#![allow(dead_code)]

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use pursuit::environment::Environment;
use pursuit::gen::{generate, GenParams, ObstacleShape};
use pursuit::geom::{segment_intersection, Containment, Point, SegmentIntersection};

/// ENV1 plus generated boxes with one to five obstacles.
pub fn environments(n: usize) -> Vec<Environment> {
    let mut out = vec![Environment::env1()];
    let mut seed = 0;
    while out.len() < n {
        let k = 1 + (seed as usize % 5);
        let shape = if seed % 3 == 2 {
            ObstacleShape::Rect
        } else {
            ObstacleShape::Convex
        };
        out.push(
            generate(
                &GenParams {
                    shape,
                    ..GenParams::with_k(k)
                },
                seed,
            )
            .unwrap(),
        );
        seed += 1;
    }
    out
}

/// True when no part of the open segment enters an obstacle or leaves the outer polygon.
pub fn brute_visible(env: &Environment, a: Point, b: Point) -> bool {
    let n = 64;
    for i in 0..=n {
        let q = a.lerp(b, i as f64 / n as f64);
        if env.outer.contains(q, 1e-9) == Containment::Outside {
            return false;
        }
        if env
            .obstacles
            .iter()
            .any(|o| o.contains(q, 1e-9) == Containment::Inside)
        {
            return false;
        }
    }
    env.components().all(|poly| {
        poly.edges().all(|(c, d)| {
            !matches!(
                segment_intersection(a, b, c, d, 1e-9),
                SegmentIntersection::Point {
                    touching: false,
                    ..
                }
            )
        })
    })
}

#[derive(PartialEq)]
struct Item(f64, usize);

impl Eq for Item {}

impl PartialOrd for Item {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for Item {
    fn cmp(&self, o: &Self) -> Ordering {
        o.0.total_cmp(&self.0)
    }
}

/// Dense grid over the bounding box with edges to every free node within
/// `R` cells along a primitive direction. Polygon vertices are extra nodes
/// joined to the grid nodes and vertices within `R` cells.
pub struct Grid {
    pub pitch: f64,
    extra: Vec<Point>,
    x0: f64,
    y0: f64,
    nx: usize,
    ny: usize,
    free: Vec<bool>,
    adj: Vec<Vec<(usize, f64)>>,
}

const R: i64 = 4;

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

impl Grid {
    pub fn new(env: &Environment, pitch: f64) -> Grid {
        let vs = env.outer.vertices();
        let x0 = vs.iter().map(|p| p.x).fold(f64::INFINITY, f64::min);
        let y0 = vs.iter().map(|p| p.y).fold(f64::INFINITY, f64::min);
        let x1 = vs.iter().map(|p| p.x).fold(f64::NEG_INFINITY, f64::max);
        let y1 = vs.iter().map(|p| p.y).fold(f64::NEG_INFINITY, f64::max);
        let nx = ((x1 - x0) / pitch).floor() as usize + 1;
        let ny = ((y1 - y0) / pitch).floor() as usize + 1;
        let extra: Vec<Point> = env
            .components()
            .flat_map(|p| p.vertices().to_vec())
            .collect();
        let mut g = Grid {
            pitch,
            extra,
            x0,
            y0,
            nx,
            ny,
            free: vec![],
            adj: vec![],
        };
        g.free = (0..nx * ny)
            .map(|i| {
                let p = g.point(i);
                env.outer.contains(p, 1e-9) != Containment::Outside
                    && env
                        .obstacles
                        .iter()
                        .all(|o| o.contains(p, 1e-9) != Containment::Inside)
            })
            .collect();
        let dirs: Vec<(i64, i64)> = (-R..=R)
            .flat_map(|dx| (-R..=R).map(move |dy| (dx, dy)))
            .filter(|&(dx, dy)| (dx, dy) != (0, 0) && gcd(dx, dy) == 1)
            .collect();
        g.adj = vec![Vec::new(); nx * ny + g.extra.len()];
        for i in 0..nx * ny {
            if !g.free[i] {
                continue;
            }
            let (ix, iy) = ((i % nx) as i64, (i / nx) as i64);
            for &(dx, dy) in &dirs {
                let (jx, jy) = (ix + dx, iy + dy);
                if jx < 0 || jy < 0 || jx >= nx as i64 || jy >= ny as i64 {
                    continue;
                }
                let j = jy as usize * nx + jx as usize;
                if j < i || !g.free[j] {
                    continue;
                }
                let (a, b) = (g.point(i), g.point(j));
                if brute_visible(env, a, b) {
                    let w = a.dist(b);
                    g.adj[i].push((j, w));
                    g.adj[j].push((i, w));
                }
            }
        }
        let reach = R as f64 * pitch;
        for a in 0..g.extra.len() {
            let i = nx * ny + a;
            let p = g.extra[a];
            let (cx, cy) = (
                ((p.x - x0) / pitch).round() as i64,
                ((p.y - y0) / pitch).round() as i64,
            );
            let mut near: Vec<usize> = (nx * ny + a + 1..nx * ny + g.extra.len()).collect();
            for jy in (cy - R - 1).max(0)..=(cy + R + 1).min(ny as i64 - 1) {
                for jx in (cx - R - 1).max(0)..=(cx + R + 1).min(nx as i64 - 1) {
                    let j = jy as usize * nx + jx as usize;
                    if g.free[j] {
                        near.push(j);
                    }
                }
            }
            for j in near {
                let q = g.point(j);
                if p.dist(q) <= reach && brute_visible(env, p, q) {
                    let w = p.dist(q);
                    g.adj[i].push((j, w));
                    g.adj[j].push((i, w));
                }
            }
        }
        g
    }

    pub fn point(&self, i: usize) -> Point {
        if i >= self.nx * self.ny {
            return self.extra[i - self.nx * self.ny];
        }
        Point::new(
            self.x0 + (i % self.nx) as f64 * self.pitch,
            self.y0 + (i / self.nx) as f64 * self.pitch,
        )
    }

    pub fn free_nodes(&self) -> Vec<usize> {
        (0..self.nx * self.ny)
            .filter(|&i| self.free[i] && !self.adj[i].is_empty())
            .collect()
    }

    /// Dijkstra from node `s` to every node.
    pub fn distances(&self, s: usize) -> Vec<f64> {
        let mut d = vec![f64::INFINITY; self.adj.len()];
        let mut h = BinaryHeap::new();
        d[s] = 0.0;
        h.push(Item(0.0, s));
        while let Some(Item(du, u)) = h.pop() {
            if du > d[u] {
                continue;
            }
            for &(v, w) in &self.adj[u] {
                if du + w < d[v] {
                    d[v] = du + w;
                    h.push(Item(d[v], v));
                }
            }
        }
        d
    }
}
