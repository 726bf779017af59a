//! Play one game and write its trace.
//!
//! `cargo run --release --example single_game -- random 7 /tmp/game.jsonl`

use std::fs::File;

use pursuit::gen::{generate, GenParams};
use pursuit::sim::{check_bound, run_game, Event, GameConfig, BOUND_CONSTANT};
use pursuit::strategy::EvaderPolicy;

fn main() {
    let mut args = std::env::args().skip(1);
    let policy: EvaderPolicy = args
        .next()
        .map_or(EvaderPolicy::Greedy, |s| s.parse().unwrap());
    let seed: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(0);
    let out = args.next();

    let env = generate(&GenParams::with_k(3), seed).unwrap();
    let res = run_game(env, GameConfig::new(policy, seed)).unwrap();
    for r in &res.trace.turns {
        for ev in &r.events {
            if !matches!(ev, Event::LionStep { .. }) {
                println!("turn {:4}: {ev:?}", r.t);
            }
        }
    }
    let b = check_bound(&res, BOUND_CONSTANT);
    println!(
        "{:?} at turn {:?}, {} rounds, budget {:.0}, margin {:.0}",
        res.status, res.capture_turn, res.stats.rounds, b.budget, b.margin
    );
    if let Some(path) = out {
        res.trace.write_jsonl(File::create(&path).unwrap()).unwrap();
        println!("trace written to {path}");
    }
}
