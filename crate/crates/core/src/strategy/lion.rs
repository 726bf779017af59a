use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::geodesic::{Field, Region};
use crate::geom::{Point, Polyline};

use super::StrategyError;

/// Slack on the squared-distance growth check.
pub const LION_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LionPhase {
    /// Walking to the center along a geodesic of the free space.
    Reach,
    Hunt,
}

/// Result of one hunting step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LionStep {
    pub to: Point,
    /// Geodesic distance from the center before and after the move.
    pub radius_before: f64,
    pub radius_after: f64,
    pub captured: bool,
    /// `radius_after² ≥ radius_before² + 1` held within tolerance.
    pub growth_ok: bool,
}

/// Pursuer that stays on the geodesic from a fixed center to the evader and
/// moves outward along it as far as a unit step allows.
#[derive(Debug, Clone)]
pub struct LionController {
    region: Arc<Region>,
    domain: Arc<Region>,
    center: Point,
    center_field: Field,
    phase: LionPhase,
    route: Option<Polyline>,
    walked: f64,
}

impl LionController {
    /// `region` must be simply connected (a type-0 territory); `center` on its boundary.
    pub fn new(region: Arc<Region>, domain: Arc<Region>, center: Point) -> Self {
        let center_field = region.field(&region.anchor(center));
        LionController {
            region,
            domain,
            center,
            center_field,
            phase: LionPhase::Reach,
            route: None,
            walked: 0.0,
        }
    }

    /// A lion already standing at the center.
    pub fn at_center(region: Arc<Region>, domain: Arc<Region>, center: Point) -> Self {
        let mut l = LionController::new(region, domain, center);
        l.phase = LionPhase::Hunt;
        l
    }

    pub fn center(&self) -> Point {
        self.center
    }

    pub fn phase(&self) -> LionPhase {
        self.phase
    }

    pub fn region(&self) -> &Arc<Region> {
        &self.region
    }

    /// Geodesic from the center to `e`.
    pub fn center_path(&self, e: Point) -> Option<Polyline> {
        let pts = self
            .region
            .field_path(&self.center_field, &self.region.anchor(e))?;
        Polyline::new(pts)
            .ok()
            .or_else(|| Some(Polyline::degenerate(self.center)))
    }

    /// One pursuer move from `pos` given the evader's current position.
    pub fn step(&mut self, pos: Point, evader: Point) -> Result<LionStep, StrategyError> {
        let tol = self.region.tol();
        if self.phase == LionPhase::Reach {
            if pos.dist(self.center) <= tol {
                self.phase = LionPhase::Hunt;
            } else {
                if self.route.is_none() {
                    let sp = self
                        .domain
                        .shortest_path(pos, self.center)
                        .ok_or(StrategyError::Unreachable(pos, self.center))?;
                    self.route = Some(sp.line);
                    self.walked = 0.0;
                }
                let route = self.route.as_ref().unwrap();
                self.walked = (self.walked + 1.0).min(route.length());
                let to = route.point_at_clamped(self.walked);
                if to.dist(self.center) <= tol {
                    self.phase = LionPhase::Hunt;
                }
                return Ok(LionStep {
                    to,
                    radius_before: 0.0,
                    radius_after: 0.0,
                    captured: false,
                    growth_ok: true,
                });
            }
        }
        lion_step(&self.region, &self.center_field, pos, evader)
    }
}

/// Moves from `pos` (on the geodesic from the field's source to the previous
/// evader position) to the farthest point of the new geodesic within unit distance.
pub fn lion_step(
    region: &Region,
    center_field: &Field,
    pos: Point,
    evader: Point,
) -> Result<LionStep, StrategyError> {
    let pa = region.anchor(pos);
    let ea = region.anchor(evader);
    let radius_before = region.field_distance(center_field, &pa);
    let pf = region.field(&pa);
    let reach = region.field_distance(&pf, &ea);
    let total = region.field_distance(center_field, &ea);
    if !reach.is_finite() || !total.is_finite() {
        return Err(StrategyError::Unreachable(pos, evader));
    }
    if reach <= 1.0 {
        return Ok(LionStep {
            to: evader,
            radius_before,
            radius_after: total,
            captured: true,
            growth_ok: total * total >= radius_before * radius_before + 1.0 - LION_TOL
                || reach <= 1.0,
        });
    }
    let pts = region
        .field_path(center_field, &ea)
        .ok_or(StrategyError::Unreachable(pos, evader))?;
    let path = Polyline::new(pts).map_err(|_| StrategyError::Unreachable(pos, evader))?;
    let len = path.length();
    let g = |s: f64| region.field_distance(&pf, &region.anchor(path.point_at_clamped(s)));
    // g is convex along the geodesic: ternary search for its minimum.
    let (mut lo, mut hi) = (0.0, len);
    for _ in 0..48 {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if g(m1) <= g(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    let smin = 0.5 * (lo + hi);
    if g(smin) > 1.0 + 1e-7 {
        return Err(StrategyError::LionLost { distance: g(smin) });
    }
    let (mut a, mut b) = (smin, len);
    for _ in 0..48 {
        let m = 0.5 * (a + b);
        if g(m) <= 1.0 {
            a = m;
        } else {
            b = m;
        }
    }
    let to = path.point_at_clamped(a);
    Ok(LionStep {
        to,
        radius_before,
        radius_after: a,
        captured: false,
        growth_ok: a * a >= radius_before * radius_before + 1.0 - LION_TOL,
    })
}
