//! Pursuer controllers and evader policies.

mod evader;
mod guard;
mod lion;

use thiserror::Error;

use crate::geom::Point;

pub use evader::{candidate_steps, evader_step, place_evader, EvaderPolicy, EvaderView, N_CAND};
pub use guard::{GuardController, GuardPhase, GuardStep};
pub use lion::{lion_step, LionController, LionPhase, LionStep, LION_TOL};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StrategyError {
    #[error("no path from {0:?} to {1:?}")]
    Unreachable(Point, Point),
    #[error("lion lost contact with the center geodesic (distance {distance})")]
    LionLost { distance: f64 },
}
