//! Batch runs over many environments and seeds.

use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::environment::Environment;
use crate::gen::{generate, GenError, GenParams};
use crate::sim::{
    check_bound, finish, replay, Game, GameConfig, GameStatus, Trace, BOUND_CONSTANT,
};
use crate::strategy::EvaderPolicy;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum EnvSource {
    /// Fixed environments, each played `repetitions` times with seeds `0..repetitions`.
    List(Vec<Environment>),
    /// One generated environment per `(k, seed)`; the seed also drives the game.
    Generated {
        ks: Vec<usize>,
        seeds: std::ops::Range<u64>,
        params: GenParams,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignSpec {
    pub source: EnvSource,
    pub policy: EvaderPolicy,
    pub repetitions: u64,
    pub bound_constant: f64,
    pub turn_cap: Option<u64>,
    /// Re-run each game from its serialized trace and compare every record.
    pub verify_replay: bool,
    /// Directory for one `<env>-<seed>.jsonl` trace per game.
    pub trace_dir: Option<PathBuf>,
}

impl CampaignSpec {
    pub fn generated(ks: Vec<usize>, seeds: std::ops::Range<u64>, policy: EvaderPolicy) -> Self {
        CampaignSpec {
            source: EnvSource::Generated {
                ks,
                seeds,
                params: GenParams::default(),
            },
            policy,
            repetitions: 1,
            bound_constant: BOUND_CONSTANT,
            turn_cap: None,
            verify_replay: false,
            trace_dir: None,
        }
    }

    pub fn list(envs: Vec<Environment>, repetitions: u64, policy: EvaderPolicy) -> Self {
        CampaignSpec {
            source: EnvSource::List(envs),
            policy,
            repetitions,
            bound_constant: BOUND_CONSTANT,
            turn_cap: None,
            verify_replay: false,
            trace_dir: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowStatus {
    Pass,
    BoundExceeded,
    TurnCap,
    ReplayMismatch,
    Error,
}

impl RowStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            RowStatus::Pass => "pass",
            RowStatus::BoundExceeded => "bound_exceeded",
            RowStatus::TurnCap => "turn_cap",
            RowStatus::ReplayMismatch => "replay_mismatch",
            RowStatus::Error => "error",
        }
    }
}

/// One game of a campaign. The CSV carries the first eight fields.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignRow {
    pub env: String,
    pub k: usize,
    pub diam: f64,
    pub seed: u64,
    pub capture_turn: Option<u64>,
    pub budget: f64,
    pub margin: f64,
    pub status: RowStatus,
    pub rounds: usize,
    pub ledger_transitions: usize,
    /// Every two consecutive rounds strictly decreased the progress measure.
    pub progress_ok: bool,
    pub lion_growth_failures: usize,
    pub crossings: usize,
    pub crossings_captured: usize,
    pub final_hash: String,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignSummary {
    pub rows: Vec<CampaignRow>,
}

impl CampaignSummary {
    pub fn all_passed(&self) -> bool {
        self.rows.iter().all(|r| r.status == RowStatus::Pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CampaignRow> {
        self.rows.iter().filter(|r| r.status != RowStatus::Pass)
    }

    pub fn write_csv(&self, w: impl Write) -> csv::Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record([
            "env",
            "k",
            "diam",
            "seed",
            "capture_turn",
            "budget",
            "margin",
            "status",
        ])?;
        for r in &self.rows {
            out.write_record([
                r.env.clone(),
                r.k.to_string(),
                format!("{:.6}", r.diam),
                r.seed.to_string(),
                r.capture_turn.map_or(String::new(), |t| t.to_string()),
                format!("{:.3}", r.budget),
                format!("{:.3}", r.margin),
                r.status.as_str().to_string(),
            ])?;
        }
        out.flush()?;
        Ok(())
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CampaignError {
    #[error("no environments")]
    Empty,
    #[error("generation failed for k={k}, seed={seed}: {source}")]
    Generation {
        k: usize,
        seed: u64,
        source: GenError,
    },
}

/// Progress `(dangerous, safe, type3)` must drop over every pair of rounds.
pub fn progress_decreases(progress: &[(usize, usize, bool)], start: (usize, usize, bool)) -> bool {
    let seq: Vec<_> = std::iter::once(start)
        .chain(progress.iter().copied())
        .collect();
    seq.windows(3).all(|w| w[2] < w[0])
}

fn play(env: Arc<Environment>, seed: u64, spec: &CampaignSpec) -> CampaignRow {
    let mut row = CampaignRow {
        env: env.name.clone(),
        k: env.k(),
        diam: f64::NAN,
        seed,
        capture_turn: None,
        budget: f64::NAN,
        margin: f64::NAN,
        status: RowStatus::Error,
        rounds: 0,
        ledger_transitions: 0,
        progress_ok: false,
        lion_growth_failures: 0,
        crossings: 0,
        crossings_captured: 0,
        final_hash: String::new(),
        error: None,
    };
    let cfg = GameConfig {
        policy: spec.policy,
        seed,
        turn_cap: spec.turn_cap,
        bound_constant: spec.bound_constant,
    };
    let result = Game::new((*env).clone(), cfg, None).and_then(|mut g| {
        g.run()?;
        Ok(finish(g))
    });
    let res = match result {
        Ok(r) => r,
        Err(e) => {
            row.error = Some(e.to_string());
            return row;
        }
    };
    let b = check_bound(&res, spec.bound_constant);
    row.diam = res.metrics.diameter;
    row.capture_turn = res.capture_turn;
    row.budget = b.budget;
    row.margin = b.margin;
    row.rounds = res.stats.rounds;
    row.ledger_transitions = res.stats.ledger_transitions;
    row.progress_ok = progress_decreases(&res.stats.progress, (env.k(), 0, false));
    row.lion_growth_failures = res.stats.lion_growth_failures;
    row.crossings = res.stats.crossings;
    row.crossings_captured = res.stats.crossings_captured_next_turn;
    row.final_hash = res.trace.final_hash().to_string();
    row.status = match res.status {
        GameStatus::Captured if b.ok => RowStatus::Pass,
        GameStatus::Captured => RowStatus::BoundExceeded,
        _ => RowStatus::TurnCap,
    };
    if let Some(dir) = &spec.trace_dir {
        let path = dir.join(format!("{}-{seed}.jsonl", row.env));
        if let Err(e) = std::fs::write(&path, res.trace.to_jsonl()) {
            row.status = RowStatus::Error;
            row.error = Some(format!("{}: {e}", path.display()));
            return row;
        }
    }
    if spec.verify_replay && row.status == RowStatus::Pass {
        let back = Trace::read_jsonl(res.trace.to_jsonl().as_bytes());
        match back.and_then(|t| replay(&t)) {
            Ok(rep) if rep.ok() && rep.final_hash == row.final_hash => {}
            Ok(rep) => {
                row.status = RowStatus::ReplayMismatch;
                row.error = Some(format!(
                    "divergence at {:?}, {} violations",
                    rep.divergence,
                    rep.violations.len()
                ));
            }
            Err(e) => {
                row.status = RowStatus::ReplayMismatch;
                row.error = Some(e.to_string());
            }
        }
    }
    row
}

/// The `(environment, seed)` jobs of a campaign, in output order.
pub fn jobs(spec: &CampaignSpec) -> Result<Vec<(Arc<Environment>, u64)>, CampaignError> {
    let mut out = Vec::new();
    match &spec.source {
        EnvSource::List(envs) => {
            for env in envs {
                let env = Arc::new(env.clone());
                for seed in 0..spec.repetitions {
                    out.push((env.clone(), seed));
                }
            }
        }
        EnvSource::Generated { ks, seeds, params } => {
            for &k in ks {
                for seed in seeds.clone() {
                    let p = GenParams {
                        k,
                        ..params.clone()
                    };
                    let env = Arc::new(
                        generate(&p, seed).map_err(|source| CampaignError::Generation {
                            k,
                            seed,
                            source,
                        })?,
                    );
                    for rep in 0..spec.repetitions {
                        out.push((env.clone(), seed + rep * 1_000_003));
                    }
                }
            }
        }
    }
    if out.is_empty() {
        return Err(CampaignError::Empty);
    }
    Ok(out)
}

/// Runs every job on the current rayon pool.
pub fn run_campaign(spec: &CampaignSpec) -> Result<CampaignSummary, CampaignError> {
    let jobs = jobs(spec)?;
    let rows = jobs
        .into_par_iter()
        .map(|(env, seed)| play(env, seed, spec))
        .collect();
    Ok(CampaignSummary { rows })
}
