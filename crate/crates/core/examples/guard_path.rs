//! A guard walks onto a shortest path, catches up with the evader's
//! projection and then mirrors it.
//!
//! `cargo run --example guard_path`

use std::sync::Arc;

use pursuit::environment::Environment;
use pursuit::geodesic::Territory;
use pursuit::geom::Point;
use pursuit::planner::plan_initialization;
use pursuit::strategy::GuardController;

fn main() {
    let t = Territory::whole(Arc::new(Environment::env1()));
    let path = plan_initialization(&t, 0).unwrap().path.line;
    println!("guarding {:?}", path.vertices());
    let mut guard = GuardController::new(0, path.clone(), t.metric().clone(), t.domain().clone());
    let mut pos = Point::new(10., 0.);
    // The evader strolls along the top edge.
    for turn in 0..30 {
        let e = Point::new(1.0 + 0.3 * turn as f64, 9.0);
        let s = guard.step(pos, e).unwrap();
        println!(
            "turn {turn:2}: {:?} guard {:>6.3},{:>6.3}  projection {:>6.3},{:>6.3}",
            guard.phase(),
            s.to.x,
            s.to.y,
            guard.projection(e).x,
            guard.projection(e).y
        );
        pos = s.to;
    }
}
