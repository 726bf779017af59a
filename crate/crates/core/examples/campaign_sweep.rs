//! Generated environments for several obstacle counts, all three scripted evaders.
//!
//! `cargo run --release --example campaign_sweep -- 20` plays 20 seeds per k.

use std::time::Instant;

use pursuit::campaign::{run_campaign, CampaignSpec};
use pursuit::strategy::EvaderPolicy;

fn main() {
    let seeds: u64 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(10);
    for policy in EvaderPolicy::SCRIPTED {
        let t0 = Instant::now();
        let spec = CampaignSpec::generated(vec![1, 2, 3, 5], 0..seeds, policy);
        let summary = run_campaign(&spec).expect("environments generate");
        let worst = summary
            .rows
            .iter()
            .map(|r| r.capture_turn.unwrap_or(u64::MAX) as f64 / r.budget)
            .fold(0.0, f64::max);
        let ledger_bad = summary
            .rows
            .iter()
            .filter(|r| r.ledger_transitions > 2 * r.k)
            .count();
        let progress_bad = summary.rows.iter().filter(|r| !r.progress_ok).count();
        let lion_bad: usize = summary.rows.iter().map(|r| r.lion_growth_failures).sum();
        let max_rounds = summary.rows.iter().map(|r| r.rounds).max().unwrap_or(0);
        println!(
            "{policy:>20}: {} games, {} failed, worst turn/budget {worst:.3}, {:.1}s",
            summary.rows.len(),
            summary.failures().count(),
            t0.elapsed().as_secs_f64()
        );
        println!("{:>20}  ledger>2k {ledger_bad}, progress stalls {progress_bad}, lion growth misses {lion_bad}, max rounds {max_rounds}", "");
        for r in summary.failures().take(5) {
            println!("  {} seed {} {:?} {:?}", r.env, r.seed, r.status, r.error);
        }
    }
}
