//! Round planning for the three-pursuer strategy.
//!
//! Each round assigns a free pursuer to a new minimal path inside the current
//! territory. Once that guard locks, the territory is cut along the path and
//! obstacles move through dangerous → safe → removed.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geodesic::{
    find_split_point, is_minimal_path, third_path, GeodesicError, GeodesicPath, RegionType,
    SplitPoint, Territory, Wall,
};
use crate::geom::{Point, Polyline};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PlanError {
    #[error(transparent)]
    Geodesic(#[from] GeodesicError),
    #[error("territory of type {0} needs no further rounds")]
    Endgame(RegionType),
    #[error("obstacle {obstacle} would move back from {from:?} to {to:?}")]
    LedgerRegression {
        obstacle: usize,
        from: ObstacleState,
        to: ObstacleState,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ObstacleState {
    Dangerous,
    Safe,
    Removed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transition {
    pub round: usize,
    pub obstacle: usize,
    pub from: ObstacleState,
    pub to: ObstacleState,
}

/// Per-obstacle status; transitions only move forward.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThreatLedger {
    pub states: Vec<ObstacleState>,
    pub transitions: Vec<Transition>,
}

impl ThreatLedger {
    pub fn new(k: usize) -> Self {
        ThreatLedger {
            states: vec![ObstacleState::Dangerous; k],
            transitions: vec![],
        }
    }

    /// Status implied by a territory: holes are dangerous, obstacles hanging off a wall safe, the rest removed.
    pub fn observe(t: &Territory, k: usize) -> Vec<ObstacleState> {
        let mut out = vec![ObstacleState::Removed; k];
        for &(o, _) in t.attached() {
            out[o] = ObstacleState::Safe;
        }
        for &o in t.holes() {
            out[o] = ObstacleState::Dangerous;
        }
        out
    }

    pub fn update(&mut self, t: &Territory, round: usize) -> Result<Vec<Transition>, PlanError> {
        let next = ThreatLedger::observe(t, self.states.len());
        for (o, (&old, &new)) in self.states.iter().zip(&next).enumerate() {
            if new < old {
                return Err(PlanError::LedgerRegression {
                    obstacle: o,
                    from: old,
                    to: new,
                });
            }
        }
        let mut out = Vec::new();
        for (o, (old, &new)) in self.states.iter_mut().zip(&next).enumerate() {
            if *old != new {
                out.push(Transition {
                    round,
                    obstacle: o,
                    from: *old,
                    to: new,
                });
                *old = new;
            }
        }
        self.transitions.extend_from_slice(&out);
        Ok(out)
    }

    pub fn count(&self, s: ObstacleState) -> usize {
        self.states.iter().filter(|&&x| x == s).count()
    }
}

/// The path a newly assigned pursuer has to guard this round.
#[derive(Debug, Clone)]
pub struct RoundPlan {
    pub round: usize,
    pub kind: RegionType,
    pub wall_id: u32,
    pub path: GeodesicPath,
    /// Territory in which `path` is minimal; projections are taken there.
    pub territory: Territory,
    pub split: Option<SplitPoint>,
}

impl RoundPlan {
    pub fn anchor(&self) -> Point {
        self.path.start()
    }

    pub fn region(&self) -> Arc<crate::geodesic::Region> {
        self.territory.metric().clone()
    }
}

#[derive(Debug, Clone)]
pub struct RoundOutcome {
    pub territory: Territory,
    pub removed: Vec<usize>,
    pub released: Vec<u32>,
    pub transitions: Vec<Transition>,
}

fn same_path(a: &Polyline, b: &Polyline, tol: f64) -> bool {
    let close = |p: &Polyline, q: &Polyline| p.vertices().iter().all(|&v| q.distance_to(v) <= tol);
    close(a, b) && close(b, a)
}

fn touches(t: &Territory, line: &Polyline, obstacle: usize) -> bool {
    let tol = t.region().tol() * 1e3;
    let b = t.env().obstacles[obstacle].boundary();
    line.vertices().iter().any(|&v| b.distance_to(v) <= tol)
}

/// First round: the shortest path from outer vertex 0 to the point half way around the outer boundary.
pub fn plan_initialization(t: &Territory, wall_id: u32) -> Result<RoundPlan, PlanError> {
    let a = t.anchors();
    let path = t.shortest_path(a.u.unwrap(), a.v.unwrap())?;
    Ok(RoundPlan {
        round: 0,
        kind: t.region_type(),
        wall_id,
        path,
        territory: t.clone(),
        split: None,
    })
}

/// Chooses the next path according to the territory type.
pub fn plan_round(t: &Territory, round: usize, wall_id: u32) -> Result<RoundPlan, PlanError> {
    let tol = t.region().tol() * 100.0;
    let kind = t.region_type();
    let anchors = t.anchors();
    let mut split = None;
    let path = match kind {
        RegionType::Zero => return Err(PlanError::Endgame(kind)),
        RegionType::Unguarded => {
            return plan_initialization(t, wall_id).map(|p| RoundPlan { round, ..p })
        }
        RegionType::One | RegionType::OnePrime | RegionType::Irregular => {
            let sp = find_split_point(t).or_else(|e| {
                if kind == RegionType::Irregular && !t.deltas().is_empty() {
                    crate::geodesic::find_split_point_on(t, anchors.u.unwrap(), &t.deltas()[0])
                } else {
                    Err(e)
                }
            })?;
            let fresh =
                |p: &GeodesicPath| !t.walls().iter().any(|w| same_path(&w.path, &p.line, tol));
            // Either path may be guarded; one touching a dangerous obstacle makes progress.
            let pick = sp
                .paths
                .iter()
                .filter(|p| fresh(p))
                .max_by_key(|p| {
                    t.holes()
                        .iter()
                        .filter(|&&o| touches(t, &p.line, o))
                        .count()
                })
                .unwrap_or(&sp.paths[0])
                .clone();
            split = Some(sp);
            pick
        }
        RegionType::Two => third_path(t)?,
        RegionType::Three => t.shortest_path(anchors.u.unwrap(), anchors.w.unwrap())?,
    };
    Ok(RoundPlan {
        round,
        kind,
        wall_id,
        path,
        territory: t.clone(),
        split,
    })
}

/// Cuts the territory along the locked path and updates the ledger.
pub fn apply_round_outcome(
    t: &Territory,
    plan: &RoundPlan,
    evader: Point,
    ledger: &mut ThreatLedger,
) -> Result<RoundOutcome, PlanError> {
    let cut = t.cut(
        Wall {
            id: plan.wall_id,
            path: plan.path.line.clone(),
        },
        evader,
    )?;
    let transitions = ledger.update(&cut.territory, plan.round)?;
    Ok(RoundOutcome {
        territory: cut.territory,
        removed: cut.removed,
        released: cut.released,
        transitions,
    })
}

/// `(dangerous, safe, type 3)`; a type-0 territory is terminal `(0, 0, false)`.
pub fn progress_metric(ledger: &ThreatLedger, t: &Territory) -> (usize, usize, bool) {
    if t.region_type() == RegionType::Zero {
        return (0, 0, false);
    }
    (
        ledger.count(ObstacleState::Dangerous),
        ledger.count(ObstacleState::Safe),
        t.region_type() == RegionType::Three,
    )
}

/// Whether the plan's path is minimal in the territory it was chosen in.
pub fn plan_is_minimal(plan: &RoundPlan) -> bool {
    is_minimal_path(&plan.territory, &plan.path.line)
}
