//! Replay a trace, then tamper with it and replay again.
//!
//! `cargo run --release --example replay_trace`

use pursuit::environment::Environment;
use pursuit::sim::{replay, run_game, GameConfig, Trace};
use pursuit::strategy::EvaderPolicy;

fn main() {
    let res = run_game(
        Environment::env1(),
        GameConfig::new(EvaderPolicy::Random, 4),
    )
    .unwrap();
    let text = res.trace.to_jsonl();
    println!(
        "{} records, {} bytes, final hash {}",
        res.trace.turns.len(),
        text.len(),
        res.trace.final_hash()
    );

    let trace = Trace::read_jsonl(text.as_bytes()).unwrap();
    let rep = replay(&trace).unwrap();
    println!(
        "clean replay: ok={} divergence={:?}",
        rep.ok(),
        rep.divergence
    );

    let mut bad = trace.clone();
    let n = bad.turns.len() / 2;
    bad.turns[n].p[0].x += 0.5;
    let rep = replay(&bad).unwrap();
    println!(
        "tampered at turn {}: ok={} divergence={:?} chain broken at {:?} violations {:?}",
        bad.turns[n].t,
        rep.ok(),
        rep.divergence,
        rep.broken_chain,
        rep.violations
    );
}
