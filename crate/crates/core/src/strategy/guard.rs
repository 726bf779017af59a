use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::geodesic::{Projector, Region};
use crate::geom::{Point, Polyline};

use super::StrategyError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GuardPhase {
    /// Walking to the start of the path.
    Reach,
    /// On the path, closing in on the evader's projection.
    Chase,
    /// On the projection; stays there every turn.
    Lock,
}

/// Guards a minimal path by tracking the evader's projection onto it.
#[derive(Debug, Clone)]
pub struct GuardController {
    pub wall_id: u32,
    projector: Projector,
    domain: Arc<Region>,
    phase: GuardPhase,
    route: Option<Polyline>,
    walked: f64,
    /// Arc-length position on the path once on it.
    s: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GuardStep {
    pub to: Point,
    pub locked_now: bool,
}

impl GuardController {
    /// `region` is the territory in which `path` is minimal.
    pub fn new(wall_id: u32, path: Polyline, region: Arc<Region>, domain: Arc<Region>) -> Self {
        GuardController {
            wall_id,
            projector: Projector::new(region, path),
            domain,
            phase: GuardPhase::Reach,
            route: None,
            walked: 0.0,
            s: 0.0,
        }
    }

    pub fn phase(&self) -> GuardPhase {
        self.phase
    }

    pub fn path(&self) -> &Polyline {
        self.projector.path()
    }

    pub fn projection(&self, e: Point) -> Point {
        self.projector.project(e)
    }

    pub fn step(&mut self, pos: Point, evader: Point) -> Result<GuardStep, StrategyError> {
        let tol = self.domain.tol();
        let start = self.path().start();
        match self.phase {
            GuardPhase::Reach => {
                if pos.dist(start) > tol {
                    if self.route.is_none() {
                        let sp = self
                            .domain
                            .shortest_path(pos, start)
                            .ok_or(StrategyError::Unreachable(pos, start))?;
                        self.route = Some(sp.line);
                        self.walked = 0.0;
                    }
                    let route = self.route.as_ref().unwrap();
                    self.walked = (self.walked + 1.0).min(route.length());
                    let to = route.point_at_clamped(self.walked);
                    if to.dist(start) <= tol {
                        self.phase = GuardPhase::Chase;
                        self.s = 0.0;
                    }
                    return Ok(GuardStep {
                        to,
                        locked_now: false,
                    });
                }
                self.phase = GuardPhase::Chase;
                self.s = 0.0;
                self.chase(evader)
            }
            GuardPhase::Chase => self.chase(evader),
            GuardPhase::Lock => {
                self.s = self.projector.param(evader);
                Ok(GuardStep {
                    to: self.path().point_at_clamped(self.s),
                    locked_now: false,
                })
            }
        }
    }

    fn chase(&mut self, evader: Point) -> Result<GuardStep, StrategyError> {
        let target = self.projector.param(evader);
        let gap = target - self.s;
        let locked_now = gap.abs() <= 1.0;
        self.s += gap.clamp(-1.0, 1.0);
        if locked_now {
            self.s = target;
            self.phase = GuardPhase::Lock;
        }
        Ok(GuardStep {
            to: self.path().point_at_clamped(self.s),
            locked_now,
        })
    }
}
