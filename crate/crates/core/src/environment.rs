//! The arena: an outer polygon with polygonal obstacles.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geodesic::Region;
use crate::geom::{Containment, Point, Polygon};

#[derive(Debug, Error)]
pub enum EnvironmentError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("validation: {0}")]
    Invalid(String),
}

/// Outer boundary plus disjoint obstacles. Obstacles are stored
/// counterclockwise like the outer polygon.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Environment {
    pub name: String,
    pub outer: Polygon,
    #[serde(default)]
    pub obstacles: Vec<Polygon>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Violation {
    NotSimple {
        polygon: String,
        edges: Vec<(usize, usize)>,
    },
    Degenerate {
        polygon: String,
    },
    ObstacleNotInside {
        obstacle: usize,
        vertex: Option<Point>,
    },
    ZeroSeparation {
        a: String,
        b: String,
        distance: f64,
    },
    Nested {
        outer: usize,
        inner: usize,
    },
    Disconnected {
        component_vertex: Point,
    },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::NotSimple { polygon, edges } => {
                write!(f, "{polygon} is not simple (crossing edges {edges:?})")
            }
            Violation::Degenerate { polygon } => write!(f, "{polygon} is degenerate"),
            Violation::ObstacleNotInside { obstacle, vertex } => {
                write!(
                    f,
                    "obstacle {obstacle} is not strictly inside the outer boundary"
                )?;
                if let Some(v) = vertex {
                    write!(f, " (vertex {v:?})")?;
                }
                Ok(())
            }
            Violation::ZeroSeparation { a, b, distance } => {
                write!(
                    f,
                    "zero separation between {a} and {b} (distance {distance})"
                )
            }
            Violation::Nested { outer, inner } => {
                write!(f, "obstacle {inner} lies inside obstacle {outer}")
            }
            Violation::Disconnected { component_vertex } => {
                write!(f, "free space is disconnected near {component_vertex:?}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn summary(&self) -> String {
        self.violations
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join("; ")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnvironmentMetrics {
    /// Minimum distance between distinct boundary components; `+inf` without obstacles.
    pub d_min: f64,
    /// Geodesic diameter estimate over vertices and boundary samples.
    pub diameter: f64,
    pub k: usize,
}

impl EnvironmentMetrics {
    /// Global incidence tolerance, 1e-9 of the diameter.
    pub fn tolerance(&self) -> f64 {
        1e-9 * self.diameter
    }
}

/// Upper bound on the number of boundary samples used by the diameter estimate.
const MAX_DIAMETER_SAMPLES: usize = 400;

impl Environment {
    pub fn new(name: impl Into<String>, outer: Polygon, obstacles: Vec<Polygon>) -> Self {
        Environment {
            name: name.into(),
            outer,
            obstacles,
        }
    }

    pub fn k(&self) -> usize {
        self.obstacles.len()
    }

    /// Tolerance derived before the geodesic diameter is known: 1e-9 of the
    /// Euclidean diameter of the outer vertices.
    pub fn tolerance(&self) -> f64 {
        1e-9 * self.euclidean_diameter().max(1e-300)
    }

    pub fn euclidean_diameter(&self) -> f64 {
        let v = self.outer.vertices();
        let mut d: f64 = 0.0;
        for (i, a) in v.iter().enumerate() {
            for b in &v[i + 1..] {
                d = d.max(a.dist(*b));
            }
        }
        d
    }

    /// All boundary components: index 0 is the outer polygon, `i + 1` is obstacle `i`.
    pub fn components(&self) -> impl Iterator<Item = &Polygon> {
        std::iter::once(&self.outer).chain(self.obstacles.iter())
    }

    pub fn validate(&self) -> ValidationReport {
        let tol = self.tolerance();
        let mut violations = Vec::new();
        let label = |i: usize| {
            if i == 0 {
                "outer".to_string()
            } else {
                format!("obstacle {}", i - 1)
            }
        };
        let mut shapes_ok = true;
        for (i, poly) in self.components().enumerate() {
            let crossings = if poly.len() >= 3 {
                poly.self_intersections(tol)
            } else {
                vec![]
            };
            if !crossings.is_empty() {
                violations.push(Violation::NotSimple {
                    polygon: label(i),
                    edges: crossings,
                });
                shapes_ok = false;
            } else if poly.len() < 3 || poly.area().abs() <= tol * tol {
                violations.push(Violation::Degenerate { polygon: label(i) });
                shapes_ok = false;
            }
        }
        for (i, obs) in self.obstacles.iter().enumerate() {
            if let Some(v) = obs
                .vertices()
                .iter()
                .find(|&&v| self.outer.contains(v, tol) != Containment::Inside)
            {
                violations.push(Violation::ObstacleNotInside {
                    obstacle: i,
                    vertex: Some(*v),
                });
                continue;
            }
            let d = obs.boundary_distance(&self.outer);
            if d <= tol {
                violations.push(Violation::ZeroSeparation {
                    a: "outer".into(),
                    b: label(i + 1),
                    distance: d,
                });
            }
        }
        for i in 0..self.obstacles.len() {
            for j in i + 1..self.obstacles.len() {
                let (a, b) = (&self.obstacles[i], &self.obstacles[j]);
                let d = a.boundary_distance(b);
                if d <= tol {
                    violations.push(Violation::ZeroSeparation {
                        a: label(i + 1),
                        b: label(j + 1),
                        distance: d,
                    });
                } else if a.contains(b.vertices()[0], tol) == Containment::Inside {
                    violations.push(Violation::Nested { outer: i, inner: j });
                } else if b.contains(a.vertices()[0], tol) == Containment::Inside {
                    violations.push(Violation::Nested { outer: j, inner: i });
                }
            }
        }
        if shapes_ok && violations.is_empty() {
            let region = Region::from_environment(self);
            if let Some(p) = region.disconnected_vertex() {
                violations.push(Violation::Disconnected {
                    component_vertex: p,
                });
            }
        }
        ValidationReport { violations }
    }

    pub fn ensure_valid(&self) -> Result<(), EnvironmentError> {
        let report = self.validate();
        if report.is_ok() {
            Ok(())
        } else {
            Err(EnvironmentError::Invalid(report.summary()))
        }
    }

    /// Brute-force minimum over segment pairs of distinct components.
    pub fn d_min(&self) -> f64 {
        let comps: Vec<&Polygon> = self.components().collect();
        let mut d = f64::INFINITY;
        for i in 0..comps.len() {
            for j in i + 1..comps.len() {
                d = d.min(comps[i].boundary_distance(comps[j]));
            }
        }
        d
    }

    pub fn metrics(&self) -> Result<EnvironmentMetrics, EnvironmentError> {
        self.ensure_valid()?;
        let d_min = self.d_min();
        let region = Region::from_environment(self);
        let mut samples: Vec<Point> = Vec::new();
        for poly in self.components() {
            samples.extend_from_slice(poly.vertices());
        }
        if d_min.is_finite() {
            let perimeter: f64 = self.components().map(Polygon::perimeter).sum();
            let spacing = (d_min / 2.0).max(perimeter / MAX_DIAMETER_SAMPLES as f64);
            for poly in self.components() {
                for (a, b) in poly.edges() {
                    let n = (a.dist(b) / spacing).floor() as usize;
                    for s in 1..=n {
                        let t = s as f64 / (n + 1) as f64;
                        samples.push(a.lerp(b, t));
                    }
                }
            }
        }
        let anchors: Vec<_> = samples.iter().map(|&p| region.anchor(p)).collect();
        let mut diameter: f64 = 0.0;
        for (i, a) in anchors.iter().enumerate() {
            let field = region.field(a);
            for b in &anchors[i + 1..] {
                let d = region.field_distance(&field, b);
                if d.is_finite() {
                    diameter = diameter.max(d);
                }
            }
        }
        Ok(EnvironmentMetrics {
            d_min,
            diameter,
            k: self.k(),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("environment serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, EnvironmentError> {
        let env: Environment = serde_json::from_str(text).map_err(|e| EnvironmentError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        if let Some(p) = env
            .components()
            .flat_map(|p| p.vertices())
            .find(|p| !p.is_finite())
        {
            return Err(EnvironmentError::Parse {
                line: 0,
                column: 0,
                message: format!("non-finite coordinate {p:?}"),
            });
        }
        Ok(env)
    }

    /// 10×10 square without obstacles.
    pub fn env0() -> Self {
        Environment::new("ENV0", Polygon::rect(0.0, 0.0, 10.0, 10.0), vec![])
    }

    /// 10×10 square with the obstacle [4,6]².
    pub fn env1() -> Self {
        Environment::new(
            "ENV1",
            Polygon::rect(0.0, 0.0, 10.0, 10.0),
            vec![Polygon::rect(4.0, 4.0, 6.0, 6.0)],
        )
    }
}
