use serde::{Deserialize, Serialize};

use crate::planner::ObstacleState;
use crate::strategy::{EvaderPolicy, LION_TOL};

use super::{Event, Game, GameConfig, SimError, Trace, TRACE_VERSION};

/// Outcome of re-running a recorded game.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplayReport {
    pub turns: usize,
    pub final_hash: String,
    /// First turn whose record differs from the recomputed one.
    pub divergence: Option<u64>,
    /// First turn whose stored hash does not match its contents.
    pub broken_chain: Option<u64>,
    /// Invariant failures, one line each.
    pub violations: Vec<String>,
}

impl ReplayReport {
    pub fn ok(&self) -> bool {
        self.divergence.is_none() && self.broken_chain.is_none() && self.violations.is_empty()
    }
}

fn check_invariants(trace: &Trace, tol: f64) -> Vec<String> {
    let mut out = Vec::new();
    let mut ledger: Vec<ObstacleState> = vec![ObstacleState::Dangerous; trace.header.env.k()];
    for w in trace.turns.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        for i in 0..3 {
            let d = a.p[i].dist(b.p[i]);
            if d > 1.0 + tol {
                out.push(format!("turn {}: pursuer {i} moved {d:.6}", b.t));
            }
        }
        let captured = b.events.iter().any(|e| matches!(e, Event::Captured { .. }));
        if !captured && a.e.dist(b.e) > 1.0 + tol {
            out.push(format!("turn {}: evader moved {:.6}", b.t, a.e.dist(b.e)));
        }
    }
    for r in &trace.turns {
        for ev in &r.events {
            match *ev {
                Event::LionStep {
                    pursuer,
                    radius_before,
                    radius_after,
                } => {
                    if radius_after * radius_after < radius_before * radius_before + 1.0 - LION_TOL
                    {
                        out.push(format!("turn {}: lion {pursuer} radius {radius_before:.6} -> {radius_after:.6}", r.t));
                    }
                }
                Event::ObstacleTransition { obstacle, from, to } => {
                    if to < from || ledger.get(obstacle) != Some(&from) {
                        out.push(format!(
                            "turn {}: obstacle {obstacle} {from:?} -> {to:?}",
                            r.t
                        ));
                    }
                    if let Some(s) = ledger.get_mut(obstacle) {
                        *s = to;
                    }
                }
                _ => {}
            }
        }
    }
    out
}

/// Re-runs the game described by the trace header and compares every turn.
/// Recorded evader positions drive the human policy.
pub fn replay(trace: &Trace) -> Result<ReplayReport, SimError> {
    let h = &trace.header;
    if h.version != TRACE_VERSION {
        return Err(SimError::Trace {
            line: 1,
            message: format!("unsupported trace version {}", h.version),
        });
    }
    let cfg = GameConfig {
        policy: h.policy,
        seed: h.seed,
        turn_cap: Some(h.turn_cap),
        bound_constant: h.bound_constant,
    };
    let human = h.policy == EvaderPolicy::Human;
    let start = if human {
        trace.turns.first().map(|r| r.e)
    } else {
        None
    };
    let mut game = Game::new(h.env.clone(), cfg, start)?;
    let tol = game.metrics.tolerance();
    let mut divergence = None;
    for (i, rec) in trace.turns.iter().enumerate() {
        let ours = if i == 0 {
            game.trace.turns[0].clone()
        } else {
            let mv = human.then_some(rec.e);
            match game.step(mv) {
                Ok(r) => r.clone(),
                Err(_) => {
                    divergence = Some(rec.t);
                    break;
                }
            }
        };
        if ours != *rec {
            divergence = Some(rec.t);
            break;
        }
    }
    if divergence.is_none() && game.trace.turns.len() != trace.turns.len() {
        divergence = Some(trace.turns.len() as u64);
    }
    Ok(ReplayReport {
        turns: trace.turns.len(),
        final_hash: trace.final_hash().to_string(),
        divergence,
        broken_chain: trace.verify_chain().err(),
        violations: check_invariants(trace, tol),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::environment::Environment;
    use crate::sim::run_game;

    #[test]
    fn recorded_game_replays() {
        let res = run_game(
            Environment::env1(),
            GameConfig::new(EvaderPolicy::Greedy, 5),
        )
        .unwrap();
        let text = res.trace.to_jsonl();
        let back = Trace::read_jsonl(text.as_bytes()).unwrap();
        let rep = replay(&back).unwrap();
        assert!(rep.ok(), "{rep:?}");
        assert_eq!(rep.final_hash, res.trace.final_hash());
    }

    #[test]
    fn tampering_is_reported() {
        let res = run_game(
            Environment::env1(),
            GameConfig::new(EvaderPolicy::Random, 2),
        )
        .unwrap();
        let mut t = res.trace.clone();
        let n = t.turns.len() / 2;
        t.turns[n].e.x += 0.01;
        let rep = replay(&t).unwrap();
        assert_eq!(rep.divergence, Some(t.turns[n].t));
        assert_eq!(rep.broken_chain, Some(t.turns[n].t));
    }
}
