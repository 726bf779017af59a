mod common;

use approx::assert_abs_diff_eq;
use proptest::prelude::*;

use pursuit::environment::Environment;
use pursuit::gen::{generate, GenParams};
use pursuit::geodesic::Region;
use pursuit::geom::{
    circle_polyline_intersections, segment_intersection, segment_segment_distance, Containment,
    Point, Polygon, Polyline,
};

fn p(x: f64, y: f64) -> Point {
    Point::new(x, y)
}

#[test]
fn circle_meets_oblique_segment_at_frozen_point() {
    // Roots of t² − (24/√17)t + 8 = 0; the far one is the lion's target.
    let line = Polyline::new(vec![p(0., 0.), p(4., 1.)]).unwrap();
    let hits = circle_polyline_intersections(p(3., 0.), 1.0, &line, 1e-12);
    assert_eq!(hits.len(), 2);
    assert_abs_diff_eq!(hits[0].1, 2.224_4, epsilon = 1e-4);
    let (q, s) = hits[1];
    assert_abs_diff_eq!(s, 3.596_421_8, epsilon = 1e-6);
    assert_abs_diff_eq!(q.x, 3.489_041_7, epsilon = 1e-6);
    assert_abs_diff_eq!(q.y, 0.872_260_4, epsilon = 1e-6);
}

#[test]
fn separation_matches_segment_pair_minimum() {
    let two = Environment::new(
        "two",
        Polygon::rect(0., 0., 10., 10.),
        vec![Polygon::rect(1., 1., 2., 2.), Polygon::rect(8., 8., 9., 9.)],
    );
    for (env, want) in [(Environment::env1(), 4.0), (two, 1.0)] {
        let m = env.metrics().unwrap();
        assert_abs_diff_eq!(m.d_min, want, epsilon = 1e-12);
    }
}

#[test]
fn square_with_hole_distances() {
    let r = Region::from_environment(&Environment::env1());
    assert_abs_diff_eq!(
        r.distance(p(0., 5.), p(10., 5.)),
        2.0 + 2.0 * 17f64.sqrt(),
        epsilon = 1e-9
    );
    assert_abs_diff_eq!(
        r.distance(p(0., 0.), p(10., 10.)),
        2.0 * 52f64.sqrt(),
        epsilon = 1e-9
    );
    let sp = r.shortest_path(p(0., 0.), p(10., 10.)).unwrap();
    assert!(
        sp.line
            .vertices()
            .iter()
            .any(|v| v.approx_eq(p(6., 4.), 1e-9))
            || sp
                .line
                .vertices()
                .iter()
                .any(|v| v.approx_eq(p(4., 6.), 1e-9))
    );
}

#[test]
fn visibility_graph_matches_brute_force() {
    let mut envs = vec![Environment::env1()];
    envs.extend((0..4).map(|s| generate(&GenParams::with_k(3), s).unwrap()));
    for env in &envs {
        let r = Region::from_environment(env);
        let n = r.node_count();
        let mut got: Vec<(usize, usize)> = r
            .graph_edges()
            .map(|(a, b, _)| (a.min(b), a.max(b)))
            .collect();
        got.sort();
        got.dedup();
        let mut want = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                if common::brute_visible(env, r.node_point(a), r.node_point(b)) {
                    want.push((a, b));
                }
            }
        }
        assert_eq!(got, want, "{}", env.name);
    }
    assert_eq!(
        Region::from_environment(&Environment::env1())
            .graph_edges()
            .count(),
        4
    );
}

#[test]
fn grid_oracle_agrees_on_the_square_with_hole() {
    let env = Environment::env1();
    let g = common::Grid::new(&env, 0.25);
    let r = Region::from_environment(&env);
    let nodes = g.free_nodes();
    let s = nodes[0];
    let d = g.distances(s);
    for &t in nodes.iter().step_by(97) {
        let exact = r.distance(g.point(s), g.point(t));
        assert!(d[t] >= exact - 1e-9);
        assert!(
            d[t] <= exact * 1.02 + 1e-9,
            "{:?}: {} vs {exact}",
            g.point(t),
            d[t]
        );
    }
}

fn arb_polyline() -> impl Strategy<Value = Polyline> {
    prop::collection::vec((-50.0..50.0f64, -50.0..50.0f64), 2..8)
        .prop_filter_map("degenerate", |v| {
            Polyline::new(v.into_iter().map(|(x, y)| p(x, y)).collect()).ok()
        })
}

proptest! {
    #[test]
    fn arclength_hits_every_vertex(line in arb_polyline()) {
        for (v, &s) in line.vertices().iter().zip(line.cumulative_lengths()) {
            let q = line.point_at(s, 1e-9).unwrap();
            prop_assert!(q.dist(*v) <= 1e-9 * (1.0 + line.length()));
        }
        prop_assert!(line.point_at(line.length() + 1.0, 1e-9).is_err());
    }

    #[test]
    fn circle_hits_lie_on_the_circle(line in arb_polyline(), cx in -20.0..20.0f64, cy in -20.0..20.0f64, r in 0.1..30.0f64) {
        let c = p(cx, cy);
        let mut last = f64::NEG_INFINITY;
        for (q, s) in circle_polyline_intersections(c, r, &line, 1e-9) {
            prop_assert!((q.dist(c) - r).abs() <= 1e-9 * 100.0);
            prop_assert!(line.distance_to(q) <= 1e-7);
            prop_assert!(s >= last);
            last = s;
        }
    }

    #[test]
    fn segment_intersection_is_symmetric(a in (-5.0..5.0f64, -5.0..5.0f64), b in (-5.0..5.0f64, -5.0..5.0f64),
                                         c in (-5.0..5.0f64, -5.0..5.0f64), d in (-5.0..5.0f64, -5.0..5.0f64)) {
        let (a, b, c, d) = (p(a.0, a.1), p(b.0, b.1), p(c.0, c.1), p(d.0, d.1));
        let x = segment_intersection(a, b, c, d, 1e-9);
        let y = segment_intersection(c, d, a, b, 1e-9);
        prop_assert_eq!(std::mem::discriminant(&x), std::mem::discriminant(&y));
    }

    #[test]
    fn geodesic_distance_is_a_metric(seed in 0u64..20, pts in prop::collection::vec((0.0..20.0f64, 0.0..20.0f64), 3)) {
        let env = generate(&GenParams::with_k(3), seed).unwrap();
        let r = Region::from_environment(&env);
        let q: Vec<Point> = pts.iter().map(|&(x, y)| p(x, y)).collect();
        prop_assume!(q.iter().all(|&x| r.contains(x) != Containment::Outside));
        let tol = 1e-9 * 40.0;
        let (ab, bc, ac) = (r.distance(q[0], q[1]), r.distance(q[1], q[2]), r.distance(q[0], q[2]));
        prop_assert!((ab - r.distance(q[1], q[0])).abs() <= tol);
        prop_assert!(ac <= ab + bc + tol);
        prop_assert!(ab >= q[0].dist(q[1]) - tol);
        let sp = r.shortest_path(q[0], q[1]).unwrap();
        prop_assert!((sp.line.length() - ab).abs() <= tol);
        for (x, y) in sp.line.segments() {
            prop_assert!(common::brute_visible(&env, x, y));
        }
    }

    #[test]
    fn segment_visibility_matches_sampling(seed in 0u64..10, a in (0.0..20.0f64, 0.0..20.0f64), b in (0.0..20.0f64, 0.0..20.0f64)) {
        let env = generate(&GenParams::with_k(4), seed).unwrap();
        let r = Region::from_environment(&env);
        let (a, b) = (p(a.0, a.1), p(b.0, b.1));
        prop_assume!(r.contains(a) == Containment::Inside && r.contains(b) == Containment::Inside);
        prop_assert_eq!(r.segment_visible(a, b), common::brute_visible(&env, a, b));
    }

    #[test]
    fn generated_environments_are_valid_and_separated(seed in 0u64..500, k in 0usize..6) {
        let env = generate(&GenParams::with_k(k), seed).unwrap();
        prop_assert!(env.validate().is_ok());
        let comps: Vec<&Polygon> = env.components().collect();
        let mut brute = f64::INFINITY;
        for i in 0..comps.len() {
            for j in i + 1..comps.len() {
                for (a, b) in comps[i].edges() {
                    for (c, d) in comps[j].edges() {
                        brute = brute.min(segment_segment_distance(a, b, c, d));
                    }
                }
            }
        }
        let m = env.metrics().unwrap();
        if k == 0 {
            prop_assert!(m.d_min.is_infinite());
        } else {
            prop_assert!(m.d_min >= 1.0);
            prop_assert!((m.d_min - brute).abs() <= 1e-9 * m.diameter);
        }
        let back = Environment::from_json(&env.to_json()).unwrap();
        prop_assert_eq!(back, env);
    }
}
