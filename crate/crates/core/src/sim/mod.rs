//! Turn-based game engine for three pursuers against one evader.

mod replay;
mod trace;

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::environment::{Environment, EnvironmentError, EnvironmentMetrics};
use crate::geodesic::{Field, Region, RegionType, Territory};
use crate::geom::{segment_intersection, Point, Polyline, SegmentIntersection};
use crate::planner::{
    apply_round_outcome, plan_initialization, plan_is_minimal, plan_round, progress_metric,
    PlanError, RoundPlan, ThreatLedger,
};
use crate::strategy::{
    evader_step, place_evader, EvaderPolicy, EvaderView, GuardController, GuardPhase,
    LionController, LionPhase, StrategyError,
};

pub use replay::{replay, ReplayReport};
pub use trace::{Event, Phase, Snapshot, Trace, TraceHeader, TurnRecord, TRACE_VERSION};

/// Default bound constant for the capture-time check.
pub const BOUND_CONSTANT: f64 = 25.0;
/// Default turn cap multiplier.
pub const TURN_CAP_FACTOR: f64 = 50.0;
pub const SNAPSHOT_EVERY: u64 = 100;

#[derive(Debug, Error)]
pub enum SimError {
    #[error(transparent)]
    Environment(#[from] EnvironmentError),
    #[error(transparent)]
    Plan(#[from] PlanError),
    #[error(transparent)]
    Strategy(#[from] StrategyError),
    #[error("no idle pursuer for round {0}")]
    NoFreePursuer(usize),
    #[error("illegal evader move from {from:?} to {to:?}")]
    IllegalMove { from: Point, to: Point },
    #[error("game is over")]
    GameOver,
    #[error("trace line {line}: {message}")]
    Trace { line: usize, message: String },
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameConfig {
    pub policy: EvaderPolicy,
    pub seed: u64,
    /// Defaults to `⌈50·(2k·diam + diam²)⌉`.
    pub turn_cap: Option<u64>,
    pub bound_constant: f64,
}

impl GameConfig {
    pub fn new(policy: EvaderPolicy, seed: u64) -> Self {
        GameConfig {
            policy,
            seed,
            turn_cap: None,
            bound_constant: BOUND_CONSTANT,
        }
    }
}

/// `2k·diam + diam²`, the shape of the capture-time bound.
pub fn bound_shape(m: &EnvironmentMetrics) -> f64 {
    2.0 * m.k as f64 * m.diameter + m.diameter * m.diameter
}

pub fn default_turn_cap(m: &EnvironmentMetrics) -> u64 {
    (TURN_CAP_FACTOR * bound_shape(m)).ceil() as u64
}

#[derive(Debug, Clone)]
pub enum Role {
    Idle,
    Guard(Box<GuardController>),
    Lion(Box<LionController>),
}

impl Role {
    pub fn phase(&self) -> Phase {
        match self {
            Role::Idle => Phase::Idle,
            Role::Guard(g) => match g.phase() {
                GuardPhase::Reach => Phase::Reach,
                GuardPhase::Chase => Phase::Chase,
                GuardPhase::Lock => Phase::Lock,
            },
            Role::Lion(l) => match l.phase() {
                LionPhase::Reach => Phase::LionReach,
                LionPhase::Hunt => Phase::Lion,
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GameStatus {
    Running,
    Captured,
    TurnCap,
}

/// Counters collected while playing.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct GameStats {
    pub rounds: usize,
    pub lion_steps: usize,
    pub lion_growth_failures: usize,
    pub lion_start_turn: Option<u64>,
    pub lion_hunt_turn: Option<u64>,
    pub minimality_failures: usize,
    pub crossings: usize,
    pub crossings_captured_next_turn: usize,
    pub ledger_transitions: usize,
    /// Progress measure after every round.
    pub progress: Vec<(usize, usize, bool)>,
    pub max_walls: usize,
    pub region_types: Vec<RegionType>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Capture {
    pub turn: u64,
    pub pursuer: usize,
}

pub struct Game {
    env: Arc<Environment>,
    metrics: EnvironmentMetrics,
    domain: Arc<Region>,
    cfg: GameConfig,
    turn_cap: u64,
    turn: u64,
    pursuers: [Point; 3],
    evader: Point,
    roles: [Role; 3],
    territory: Territory,
    ledger: ThreatLedger,
    round: usize,
    pending: Option<(usize, RoundPlan)>,
    next_wall: u32,
    capture: Option<Capture>,
    rng: ChaCha8Rng,
    fields: Vec<Field>,
    events: Vec<Event>,
    crossed_last_turn: bool,
    stats: GameStats,
    trace: Trace,
}

impl Game {
    /// Sets up turn 0. `evader_start` overrides the policy's placement.
    pub fn new(
        env: Environment,
        cfg: GameConfig,
        evader_start: Option<Point>,
    ) -> Result<Game, SimError> {
        let metrics = env.metrics()?;
        let env = Arc::new(env);
        let domain = Arc::new(Region::from_environment(&env));
        Game::with_domain(env, metrics, domain, cfg, evader_start)
    }

    pub fn with_domain(
        env: Arc<Environment>,
        metrics: EnvironmentMetrics,
        domain: Arc<Region>,
        cfg: GameConfig,
        evader_start: Option<Point>,
    ) -> Result<Game, SimError> {
        let turn_cap = cfg.turn_cap.unwrap_or_else(|| default_turn_cap(&metrics));
        let territory = Territory::whole_with_domain(env.clone(), domain.clone());
        let start = territory.anchors().u.unwrap();
        let pursuers = [start; 3];
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let fields: Vec<Field> = pursuers
            .iter()
            .map(|&p| domain.field(&domain.anchor(p)))
            .collect();
        let evader = match evader_start {
            Some(p) => {
                if domain.contains(p) == crate::geom::Containment::Outside {
                    return Err(SimError::IllegalMove { from: p, to: p });
                }
                p
            }
            None => place_evader(cfg.policy, &domain, &fields, &mut rng),
        };
        let header = TraceHeader {
            version: TRACE_VERSION,
            env: (*env).clone(),
            seed: cfg.seed,
            policy: cfg.policy,
            turn_cap,
            bound_constant: cfg.bound_constant,
        };
        let mut game = Game {
            ledger: ThreatLedger::new(env.k()),
            env,
            metrics,
            domain,
            cfg,
            turn_cap,
            turn: 0,
            pursuers,
            evader,
            roles: [Role::Idle, Role::Idle, Role::Idle],
            territory,
            round: 0,
            pending: None,
            next_wall: 0,
            capture: None,
            rng,
            fields,
            events: vec![],
            crossed_last_turn: false,
            stats: GameStats::default(),
            trace: Trace {
                header,
                turns: vec![],
            },
        };
        game.stats.region_types.push(game.territory.region_type());
        if game.territory.region_type() == RegionType::Zero {
            game.start_lion()?;
        } else {
            let plan = plan_initialization(&game.territory, game.next_wall)?;
            game.assign(plan)?;
        }
        game.record();
        Ok(game)
    }

    pub fn env(&self) -> &Arc<Environment> {
        &self.env
    }

    pub fn metrics(&self) -> &EnvironmentMetrics {
        &self.metrics
    }

    pub fn domain(&self) -> &Arc<Region> {
        &self.domain
    }

    pub fn turn(&self) -> u64 {
        self.turn
    }

    pub fn turn_cap(&self) -> u64 {
        self.turn_cap
    }

    pub fn pursuers(&self) -> [Point; 3] {
        self.pursuers
    }

    pub fn evader(&self) -> Point {
        self.evader
    }

    pub fn roles(&self) -> &[Role; 3] {
        &self.roles
    }

    pub fn territory(&self) -> &Territory {
        &self.territory
    }

    pub fn ledger(&self) -> &ThreatLedger {
        &self.ledger
    }

    pub fn capture(&self) -> Option<Capture> {
        self.capture
    }

    pub fn stats(&self) -> &GameStats {
        &self.stats
    }

    pub fn trace(&self) -> &Trace {
        &self.trace
    }

    pub fn into_trace(self) -> Trace {
        self.trace
    }

    pub fn status(&self) -> GameStatus {
        if self.capture.is_some() {
            GameStatus::Captured
        } else if self.turn >= self.turn_cap {
            GameStatus::TurnCap
        } else {
            GameStatus::Running
        }
    }

    /// Paths guarded by locked pursuers.
    pub fn locked_walls(&self) -> Vec<Polyline> {
        self.roles
            .iter()
            .filter_map(|r| match r {
                Role::Guard(g) if g.phase() == GuardPhase::Lock => Some(g.path().clone()),
                _ => None,
            })
            .collect()
    }

    fn idle_pursuer(&self) -> Option<usize> {
        (0..3).find(|&i| matches!(self.roles[i], Role::Idle))
    }

    fn assign(&mut self, plan: RoundPlan) -> Result<(), SimError> {
        let i = self
            .idle_pursuer()
            .ok_or(SimError::NoFreePursuer(plan.round))?;
        if !plan_is_minimal(&plan) {
            self.stats.minimality_failures += 1;
        }
        self.next_wall = plan.wall_id + 1;
        self.events.push(Event::PathAssigned {
            pursuer: i,
            wall: plan.wall_id,
            round: plan.round,
            region: plan.kind.to_string(),
            length: plan.path.length,
        });
        let g = GuardController::new(
            plan.wall_id,
            plan.path.line.clone(),
            plan.region(),
            self.domain.clone(),
        );
        self.roles[i] = Role::Guard(Box::new(g));
        self.pending = Some((i, plan));
        Ok(())
    }

    fn start_lion(&mut self) -> Result<(), SimError> {
        let i = self
            .idle_pursuer()
            .ok_or(SimError::NoFreePursuer(self.round))?;
        let center = self.territory.anchors().u.unwrap();
        let region = self.territory.region().clone();
        let lion = LionController::new(region, self.domain.clone(), center);
        self.roles[i] = Role::Lion(Box::new(lion));
        self.stats.lion_start_turn = Some(self.turn);
        self.events.push(Event::LionAssigned { pursuer: i, center });
        Ok(())
    }

    fn capture_check(&mut self) -> bool {
        let tau = self.metrics.tolerance();
        let ea = self.domain.anchor(self.evader);
        let mut best: Option<(f64, usize)> = None;
        for (i, f) in self.fields.iter().enumerate() {
            let d = self.domain.field_distance(f, &ea);
            if d <= 1.0 + tau && best.is_none_or(|(b, _)| d < b) {
                best = Some((d, i));
            }
        }
        if let Some((_, i)) = best {
            self.pursuers[i] = self.evader;
            self.capture = Some(Capture {
                turn: self.turn,
                pursuer: i,
            });
            self.events.push(Event::Captured { pursuer: i });
            return true;
        }
        false
    }

    fn pursuer_half_turn(&mut self) -> Result<(), SimError> {
        if self.crossed_last_turn {
            self.crossed_last_turn = false;
            if self.capture_check() {
                self.stats.crossings_captured_next_turn += 1;
                return Ok(());
            }
        } else if self.capture_check() {
            return Ok(());
        }
        let e = self.evader;
        let mut locked = None;
        for i in 0..3 {
            let pos = self.pursuers[i];
            match &mut self.roles[i] {
                Role::Idle => {}
                Role::Guard(g) => {
                    let s = g.step(pos, e)?;
                    self.pursuers[i] = s.to;
                    if s.locked_now {
                        self.events.push(Event::GuardLocked {
                            pursuer: i,
                            wall: g.wall_id,
                        });
                        if self.pending.as_ref().is_some_and(|(p, _)| *p == i) {
                            locked = Some(i);
                        }
                    }
                }
                Role::Lion(l) => {
                    let hunting = l.phase() == LionPhase::Hunt;
                    let s = l.step(pos, e)?;
                    self.pursuers[i] = s.to;
                    if hunting {
                        self.stats.lion_steps += 1;
                        if !s.growth_ok {
                            self.stats.lion_growth_failures += 1;
                        }
                        self.events.push(Event::LionStep {
                            pursuer: i,
                            radius_before: s.radius_before,
                            radius_after: s.radius_after,
                        });
                    } else if l.phase() == LionPhase::Hunt {
                        self.stats.lion_hunt_turn = Some(self.turn);
                    }
                    if s.captured {
                        self.capture = Some(Capture {
                            turn: self.turn,
                            pursuer: i,
                        });
                        self.events.push(Event::Captured { pursuer: i });
                        return Ok(());
                    }
                }
            }
        }
        if locked.is_some() {
            self.finish_round()?;
        }
        Ok(())
    }

    fn finish_round(&mut self) -> Result<(), SimError> {
        let (_, plan) = self.pending.take().expect("locked guard has a plan");
        let out = apply_round_outcome(&self.territory, &plan, self.evader, &mut self.ledger)?;
        self.events.push(Event::PathGuarded {
            wall: plan.wall_id,
            round: plan.round,
        });
        for tr in &out.transitions {
            self.events.push(Event::ObstacleTransition {
                obstacle: tr.obstacle,
                from: tr.from,
                to: tr.to,
            });
        }
        self.stats.ledger_transitions += out.transitions.len();
        if !out.released.is_empty() {
            for r in self.roles.iter_mut() {
                if let Role::Guard(g) = r {
                    if out.released.contains(&g.wall_id) {
                        *r = Role::Idle;
                    }
                }
            }
            self.events.push(Event::WallsReleased {
                walls: out.released.clone(),
            });
        }
        self.territory = out.territory;
        self.round += 1;
        self.stats.rounds = self.round;
        self.stats.max_walls = self.stats.max_walls.max(self.territory.walls().len());
        self.stats.region_types.push(self.territory.region_type());
        self.stats
            .progress
            .push(progress_metric(&self.ledger, &self.territory));
        self.events.push(Event::RegionRetyped {
            region: self.territory.region_type().to_string(),
            holes: self.territory.holes().to_vec(),
        });
        if self.territory.region_type() == RegionType::Zero {
            self.start_lion()
        } else {
            let plan = plan_round(&self.territory, self.round, self.next_wall)?;
            self.assign(plan)
        }
    }

    fn refresh_fields(&mut self) {
        self.fields = self
            .pursuers
            .iter()
            .map(|&p| self.domain.field(&self.domain.anchor(p)))
            .collect();
    }

    fn evader_half_turn(&mut self, human: Option<Point>) -> Result<(), SimError> {
        let e = self.evader;
        let locked = self.locked_walls();
        let next = match (self.cfg.policy, human) {
            (_, Some(p)) => p,
            (policy, None) => {
                let view = EvaderView {
                    domain: &self.domain,
                    territory: Some(self.territory.region()),
                    pursuer_fields: &self.fields,
                    locked_walls: &locked,
                };
                evader_step(policy, &view, e, &mut self.rng)
            }
        };
        let tol = self.metrics.tolerance();
        let walls: Vec<(u32, Polyline)> = self
            .roles
            .iter()
            .filter_map(|r| match r {
                Role::Guard(g) if g.phase() == GuardPhase::Lock => {
                    Some((g.wall_id, g.path().clone()))
                }
                _ => None,
            })
            .collect();
        for (id, w) in &walls {
            let hit = next != e
                && w.segments().any(|(a, b)| {
                    !matches!(
                        segment_intersection(e, next, a, b, tol),
                        SegmentIntersection::None
                    )
                });
            if hit {
                self.events.push(Event::WallCrossed { wall: *id });
                self.stats.crossings += 1;
                self.crossed_last_turn = true;
                break;
            }
        }
        self.evader = next;
        Ok(())
    }

    fn record(&mut self) {
        let snapshot = (self.turn % SNAPSHOT_EVERY == 0).then(|| Snapshot {
            round: self.round,
            region: self.territory.region_type().to_string(),
            walls: self.territory.walls().to_vec(),
            ledger: self.ledger.states.clone(),
        });
        let mut rec = TurnRecord {
            t: self.turn,
            p: self.pursuers,
            e: self.evader,
            phases: [
                self.roles[0].phase(),
                self.roles[1].phase(),
                self.roles[2].phase(),
            ],
            events: std::mem::take(&mut self.events),
            snapshot,
            hash: String::new(),
        };
        let prev = self.trace.final_hash().to_string();
        rec.seal(&prev);
        self.trace.turns.push(rec);
    }

    /// Rejects an evader move longer than one step or through an obstacle.
    pub fn check_move(&self, to: Point) -> Result<(), SimError> {
        let e = self.evader;
        let ok = to.x.is_finite()
            && to.y.is_finite()
            && to.dist(e) <= 1.0 + self.metrics.tolerance()
            && self.domain.segment_visible(e, to);
        if ok {
            Ok(())
        } else {
            Err(SimError::IllegalMove { from: e, to })
        }
    }

    /// Plays one full turn. `human` is the evader's move for the human policy.
    pub fn step(&mut self, human: Option<Point>) -> Result<&TurnRecord, SimError> {
        if self.status() != GameStatus::Running {
            return Err(SimError::GameOver);
        }
        if let Some(p) = human {
            self.check_move(p)?;
        }
        self.turn += 1;
        self.pursuer_half_turn()?;
        self.refresh_fields();
        if self.capture.is_none() {
            self.evader_half_turn(human)?;
        }
        self.record();
        Ok(self.trace.turns.last().unwrap())
    }

    /// Plays until capture or the turn cap.
    pub fn run(&mut self) -> Result<GameStatus, SimError> {
        while self.status() == GameStatus::Running {
            self.step(None)?;
        }
        Ok(self.status())
    }
}

/// Summary of a finished game.
#[derive(Debug, Clone)]
pub struct GameResult {
    pub status: GameStatus,
    pub capture_turn: Option<u64>,
    pub turns: u64,
    pub metrics: EnvironmentMetrics,
    pub stats: GameStats,
    pub trace: Trace,
}

pub fn run_game(env: Environment, cfg: GameConfig) -> Result<GameResult, SimError> {
    let mut game = Game::new(env, cfg, None)?;
    game.run()?;
    Ok(finish(game))
}

pub fn finish(game: Game) -> GameResult {
    GameResult {
        status: game.status(),
        capture_turn: game.capture.map(|c| c.turn),
        turns: game.turn,
        metrics: game.metrics,
        stats: game.stats.clone(),
        trace: game.trace,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub budget: f64,
    pub capture_turn: Option<u64>,
    /// `budget - capture_turn`; negative when the bound failed.
    pub margin: f64,
    pub ok: bool,
}

/// Compares the capture turn with `C·(2k·diam + diam²)`.
pub fn check_bound(result: &GameResult, bound_constant: f64) -> BoundCheck {
    let budget = bound_constant * bound_shape(&result.metrics);
    match result.capture_turn {
        Some(t) => BoundCheck {
            budget,
            capture_turn: Some(t),
            margin: budget - t as f64,
            ok: t as f64 <= budget,
        },
        None => BoundCheck {
            budget,
            capture_turn: None,
            margin: budget - result.turns as f64,
            ok: false,
        },
    }
}
