use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::environment::Environment;
use crate::geodesic::Wall;
use crate::geom::Point;
use crate::planner::ObstacleState;
use crate::strategy::EvaderPolicy;

use super::SimError;

pub const TRACE_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceHeader {
    pub version: u32,
    pub env: Environment,
    pub seed: u64,
    pub policy: EvaderPolicy,
    pub turn_cap: u64,
    pub bound_constant: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    Idle,
    Reach,
    Chase,
    Lock,
    LionReach,
    Lion,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Event {
    PathAssigned {
        pursuer: usize,
        wall: u32,
        round: usize,
        region: String,
        length: f64,
    },
    GuardLocked {
        pursuer: usize,
        wall: u32,
    },
    PathGuarded {
        wall: u32,
        round: usize,
    },
    ObstacleTransition {
        obstacle: usize,
        from: ObstacleState,
        to: ObstacleState,
    },
    RegionRetyped {
        region: String,
        holes: Vec<usize>,
    },
    WallsReleased {
        walls: Vec<u32>,
    },
    LionAssigned {
        pursuer: usize,
        center: Point,
    },
    LionStep {
        pursuer: usize,
        radius_before: f64,
        radius_after: f64,
    },
    WallCrossed {
        wall: u32,
    },
    Captured {
        pursuer: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub round: usize,
    pub region: String,
    pub walls: Vec<Wall>,
    pub ledger: Vec<ObstacleState>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TurnRecord {
    pub t: u64,
    pub p: [Point; 3],
    pub e: Point,
    pub phases: [Phase; 3],
    pub events: Vec<Event>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub snapshot: Option<Snapshot>,
    /// Chained SHA-256 over the previous hash and this record.
    #[serde(default)]
    pub hash: String,
}

impl TurnRecord {
    /// Fills `hash` from the previous record's hash.
    pub fn seal(&mut self, prev: &str) {
        self.hash = self.digest(prev);
    }

    pub fn digest(&self, prev: &str) -> String {
        let mut body = self.clone();
        body.hash.clear();
        let mut h = Sha256::new();
        h.update(prev.as_bytes());
        h.update(serde_json::to_vec(&body).expect("record serializes"));
        hex::encode(h.finalize())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub header: TraceHeader,
    pub turns: Vec<TurnRecord>,
}

impl Trace {
    pub fn final_hash(&self) -> &str {
        self.turns.last().map_or("", |r| r.hash.as_str())
    }

    pub fn write_jsonl(&self, mut w: impl Write) -> std::io::Result<()> {
        serde_json::to_writer(&mut w, &self.header)?;
        w.write_all(b"\n")?;
        for r in &self.turns {
            serde_json::to_writer(&mut w, r)?;
            w.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn to_jsonl(&self) -> String {
        let mut buf = Vec::new();
        self.write_jsonl(&mut buf).expect("in-memory write");
        String::from_utf8(buf).expect("json is utf-8")
    }

    pub fn read_jsonl(r: impl BufRead) -> Result<Trace, SimError> {
        let mut lines = r.lines().enumerate();
        let (_, first) = lines.next().ok_or_else(|| SimError::Trace {
            line: 1,
            message: "empty trace".into(),
        })?;
        let first = first.map_err(|e| SimError::Trace {
            line: 1,
            message: e.to_string(),
        })?;
        let header: TraceHeader = serde_json::from_str(&first).map_err(|e| SimError::Trace {
            line: 1,
            message: e.to_string(),
        })?;
        let mut turns = Vec::new();
        for (i, line) in lines {
            let line = line.map_err(|e| SimError::Trace {
                line: i + 1,
                message: e.to_string(),
            })?;
            if line.trim().is_empty() {
                continue;
            }
            let rec: TurnRecord = serde_json::from_str(&line).map_err(|e| SimError::Trace {
                line: i + 1,
                message: e.to_string(),
            })?;
            turns.push(rec);
        }
        Ok(Trace { header, turns })
    }

    /// Checks the hash chain; returns the first broken turn.
    pub fn verify_chain(&self) -> Result<(), u64> {
        let mut prev = String::new();
        for r in &self.turns {
            if r.digest(&prev) != r.hash {
                return Err(r.t);
            }
            prev = r.hash.clone();
        }
        Ok(())
    }
}
