//! Random environments with convex or rectangular obstacles.
//!
//! `cargo run --example generate_envs`

use pursuit::gen::{generate, star_polygon, GenParams, ObstacleShape};

fn main() {
    for (k, shape) in [
        (1, ObstacleShape::Convex),
        (3, ObstacleShape::Convex),
        (5, ObstacleShape::Rect),
    ] {
        for seed in 0..3 {
            let env = generate(
                &GenParams {
                    shape,
                    ..GenParams::with_k(k)
                },
                seed,
            )
            .unwrap();
            let m = env.metrics().unwrap();
            let sizes: Vec<usize> = env.obstacles.iter().map(|o| o.len()).collect();
            println!(
                "{:>10}: d_min {:.3} diameter {:.3} vertices {sizes:?}",
                env.name, m.d_min, m.diameter
            );
        }
    }
    let crowded = GenParams {
        k: 40,
        max_attempts: 300,
        ..GenParams::default()
    };
    println!("crowded box: {}", generate(&crowded, 0).unwrap_err());
    let star = star_polygon(11, 8.0, 2).unwrap();
    println!(
        "{}: {} vertices, diameter {:.3}",
        star.name,
        star.outer.len(),
        star.metrics().unwrap().diameter
    );
}
