//! Cut the domain with guarded walls and look for a split point.
//!
//! `cargo run --example territory_split`

use std::sync::Arc;

use pursuit::environment::Environment;
use pursuit::geodesic::{find_split_point, Territory, Wall};
use pursuit::geom::{Point, Polygon};
use pursuit::planner::plan_initialization;

fn main() {
    // Two obstacles; the first wall passes between them and touches the upper one.
    let env = Environment::new(
        "two",
        Polygon::rect(0., 0., 20., 12.),
        vec![
            Polygon::rect(8., 2., 12., 4.),
            Polygon::rect(8., 7., 12., 9.),
        ],
    );
    let t = Territory::whole(Arc::new(env));
    println!("whole: type {} holes {:?}", t.region_type(), t.holes());

    let plan = plan_initialization(&t, 0).unwrap();
    println!(
        "first wall: {:?} (length {:.3})",
        plan.path.line.vertices(),
        plan.path.length
    );
    let evader = Point::new(10., 0.5);
    let cut = t
        .cut(
            Wall {
                id: 0,
                path: plan.path.line.clone(),
            },
            evader,
        )
        .unwrap();
    let t1 = cut.territory;
    println!(
        "after cut: type {} holes {:?} attached {:?} removed {:?}",
        t1.region_type(),
        t1.holes(),
        t1.attached(),
        cut.removed
    );

    match find_split_point(&t1) {
        Ok(sp) => {
            println!("split point {:?} at arc length {:.3}", sp.x, sp.param);
            for p in &sp.paths {
                println!("  path length {:.4} word {:?}", p.length, p.signature);
            }
        }
        Err(e) => println!("no split point: {e}"),
    }
}
