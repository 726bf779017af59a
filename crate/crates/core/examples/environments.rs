//! Build, validate and serialize environments.
//!
//! `cargo run --example environments`

use pursuit::environment::Environment;
use pursuit::geom::Polygon;

fn main() {
    for env in [Environment::env0(), Environment::env1()] {
        let m = env.metrics().unwrap();
        println!(
            "{}: k={} d_min={} diameter={:.4} tol={:.2e}",
            env.name,
            m.k,
            m.d_min,
            m.diameter,
            m.tolerance()
        );
    }

    // Two obstacles sharing an edge have zero separation.
    let bad = Environment::new(
        "touching",
        Polygon::rect(0., 0., 10., 10.),
        vec![Polygon::rect(2., 2., 4., 4.), Polygon::rect(4., 2., 6., 4.)],
    );
    let report = bad.validate();
    println!("touching: ok={} {}", report.is_ok(), report.summary());

    let json = Environment::env1().to_json();
    let back = Environment::from_json(&json).unwrap();
    println!("json round trip equal: {}", back == Environment::env1());
    println!("{json}");
}
