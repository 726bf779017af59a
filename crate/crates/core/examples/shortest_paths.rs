//! Geodesic distances, shortest paths and homotopy words in the square with a hole.
//!
//! `cargo run --example shortest_paths`

use std::sync::Arc;

use pursuit::environment::Environment;
use pursuit::geodesic::{second_shortest_path, Territory};
use pursuit::geom::Point;

fn main() {
    let t = Territory::whole(Arc::new(Environment::env1()));
    for (a, b) in [
        ((0., 5.), (10., 5.)),
        ((0., 0.), (10., 10.)),
        ((1., 1.), (3., 9.)),
    ] {
        let (a, b) = (Point::new(a.0, a.1), Point::new(b.0, b.1));
        let sp = t.shortest_path(a, b).unwrap();
        println!(
            "{a:?} -> {b:?}: length {:.4} via {:?}, word {:?}",
            sp.length,
            sp.line.vertices(),
            sp.signature
        );
    }

    // The other way around the obstacle.
    let below = t
        .shortest_path(Point::new(0., 5.), Point::new(10., 5.))
        .unwrap();
    let above = second_shortest_path(&t, &below, 0).unwrap();
    println!(
        "second path: length {:.4} via {:?}, word {:?}",
        above.length,
        above.line.vertices(),
        above.signature
    );
    println!("same class: {}", above.signature == below.signature);
}
