//! Random environments: convex or rectangular obstacles in a box, and
//! star-shaped simply connected polygons.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::environment::Environment;
use crate::geom::{Containment, Point, Polygon};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GenError {
    #[error("placed {placed} of {requested} obstacles after {attempts} attempts")]
    Placement {
        placed: usize,
        requested: usize,
        attempts: usize,
    },
    #[error("invalid generator parameters: {0}")]
    Params(String),
    #[error("generated environment failed validation: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ObstacleShape {
    Convex,
    Rect,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenParams {
    pub k: usize,
    pub width: f64,
    pub height: f64,
    /// Minimum separation between any two boundary components.
    pub d_min: f64,
    pub min_radius: f64,
    pub max_radius: f64,
    pub max_vertices: usize,
    pub shape: ObstacleShape,
    pub max_attempts: usize,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            k: 3,
            width: 20.0,
            height: 20.0,
            d_min: 1.0,
            min_radius: 1.0,
            max_radius: 3.0,
            max_vertices: 7,
            shape: ObstacleShape::Convex,
            max_attempts: 2000,
        }
    }
}

impl GenParams {
    pub fn with_k(k: usize) -> Self {
        GenParams {
            k,
            ..GenParams::default()
        }
    }

    fn check(&self) -> Result<(), GenError> {
        let bad = |m: &str| Err(GenError::Params(m.to_string()));
        if !(self.width > 0.0 && self.height > 0.0) {
            return bad("box must have positive size");
        }
        if !(self.d_min > 0.0) {
            return bad("d_min must be positive");
        }
        if !(self.min_radius > 0.0 && self.min_radius <= self.max_radius) {
            return bad("need 0 < min_radius <= max_radius");
        }
        if self.max_vertices < 3 {
            return bad("max_vertices must be at least 3");
        }
        Ok(())
    }
}

fn convex_obstacle(rng: &mut impl Rng, c: Point, r: f64, max_vertices: usize) -> Polygon {
    let n = rng.gen_range(3..=max_vertices);
    // Points on a circle are in convex position; keep angular gaps below π.
    loop {
        let mut a: Vec<f64> = (0..n)
            .map(|_| rng.gen_range(0.0..std::f64::consts::TAU))
            .collect();
        a.sort_by(f64::total_cmp);
        let gaps_ok = a.windows(2).all(|w| w[1] - w[0] > 0.2 && w[1] - w[0] < 3.0)
            && a[0] + std::f64::consts::TAU - a[n - 1] > 0.2
            && a[0] + std::f64::consts::TAU - a[n - 1] < 3.0;
        if gaps_ok {
            let pts = a
                .iter()
                .map(|t| c + Point::new(t.cos(), t.sin()) * r)
                .collect();
            return Polygon::from_vertices_unchecked(pts);
        }
    }
}

fn rect_obstacle(rng: &mut impl Rng, c: Point, r: f64) -> Polygon {
    let w = rng.gen_range(0.4..1.0) * r;
    let h = rng.gen_range(0.4..1.0) * r;
    Polygon::rect(c.x - w, c.y - h, c.x + w, c.y + h)
}

/// Box with `k` random obstacles pairwise and from the box at least `d_min` apart.
pub fn generate(params: &GenParams, seed: u64) -> Result<Environment, GenError> {
    params.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let outer = Polygon::rect(0.0, 0.0, params.width, params.height);
    let mut obstacles: Vec<Polygon> = Vec::with_capacity(params.k);
    let mut attempts = 0;
    while obstacles.len() < params.k {
        if attempts >= params.max_attempts {
            return Err(GenError::Placement {
                placed: obstacles.len(),
                requested: params.k,
                attempts,
            });
        }
        attempts += 1;
        let r = rng.gen_range(params.min_radius..=params.max_radius);
        let margin = r + params.d_min;
        if 2.0 * margin >= params.width || 2.0 * margin >= params.height {
            continue;
        }
        let c = Point::new(
            rng.gen_range(margin..params.width - margin),
            rng.gen_range(margin..params.height - margin),
        );
        let poly = match params.shape {
            ObstacleShape::Convex => convex_obstacle(&mut rng, c, r, params.max_vertices),
            ObstacleShape::Rect => rect_obstacle(&mut rng, c, r),
        };
        let clear = poly.boundary_distance(&outer) >= params.d_min
            && obstacles.iter().all(|o| {
                o.boundary_distance(&poly) >= params.d_min
                    && o.contains(poly.vertices()[0], 0.0) == Containment::Outside
                    && poly.contains(o.vertices()[0], 0.0) == Containment::Outside
            });
        if clear {
            obstacles.push(poly);
        }
    }
    let env = Environment::new(format!("gen-k{}-s{seed}", params.k), outer, obstacles);
    let report = env.validate();
    if !report.is_ok() {
        return Err(GenError::Invalid(report.summary()));
    }
    Ok(env)
}

/// Star-shaped polygon without obstacles: `n` vertices at sorted angles with
/// radii in `[0.4, 1]·radius` around the origin shifted by `radius`.
pub fn star_polygon(n: usize, radius: f64, seed: u64) -> Result<Environment, GenError> {
    if n < 5 || !(radius > 0.0) {
        return Err(GenError::Params(
            "star polygon needs n >= 5 and a positive radius".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c = Point::new(radius, radius);
    let step = std::f64::consts::TAU / n as f64;
    let pts: Vec<Point> = (0..n)
        .map(|i| {
            let a = (i as f64 + rng.gen_range(0.1..0.9)) * step;
            c + Point::new(a.cos(), a.sin()) * (radius * rng.gen_range(0.4..1.0))
        })
        .collect();
    let env = Environment::new(
        format!("star-n{n}-s{seed}"),
        Polygon::from_vertices_unchecked(pts),
        vec![],
    );
    let report = env.validate();
    if !report.is_ok() {
        return Err(GenError::Invalid(report.summary()));
    }
    Ok(env)
}
