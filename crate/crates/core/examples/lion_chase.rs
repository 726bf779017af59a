//! The lion's strategy in a simply connected polygon against a greedy evader.
//!
//! `cargo run --example lion_chase -- 3` uses generator seed 3.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use pursuit::gen::star_polygon;
use pursuit::geodesic::Region;
use pursuit::strategy::{evader_step, place_evader, EvaderPolicy, EvaderView, LionController};

fn main() {
    let seed: u64 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(0);
    let env = star_polygon(9, 10.0, seed).unwrap();
    let diam = env.metrics().unwrap().diameter;
    let region = Arc::new(Region::from_environment(&env));
    let center = env.outer.vertices()[0];
    let mut lion = LionController::at_center(region.clone(), region.clone(), center);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pos = center;
    let fields = [region.field(&region.anchor(pos))];
    let mut e = place_evader(EvaderPolicy::Greedy, &region, &fields, &mut rng);
    println!(
        "diameter {diam:.3}, budget {:.0} turns, evader starts at {e:?}",
        diam * diam + 2.0 * diam
    );

    for turn in 1.. {
        let s = lion.step(pos, e).unwrap();
        pos = s.to;
        println!(
            "turn {turn:3}: r {:.3} -> {:.3}  r²+1 held: {}",
            s.radius_before, s.radius_after, s.growth_ok
        );
        if s.captured {
            println!("captured at turn {turn}");
            break;
        }
        let fields = [region.field(&region.anchor(pos))];
        let view = EvaderView {
            domain: &region,
            territory: None,
            pursuer_fields: &fields,
            locked_walls: &[],
        };
        e = evader_step(EvaderPolicy::Greedy, &view, e, &mut rng);
    }
}
