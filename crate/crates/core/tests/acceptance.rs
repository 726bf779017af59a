//! One test per headline property. Each prints a single PASS/FAIL line.
//!
//! Run with `cargo test --test acceptance -- --nocapture`.

mod common;

use std::sync::{Arc, OnceLock};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pursuit::campaign::{run_campaign, CampaignSpec, CampaignSummary, RowStatus};
use pursuit::environment::Environment;
use pursuit::gen::star_polygon;
use pursuit::geodesic::{find_split_point, Projector, Region, RegionType, Territory};
use pursuit::geom::{segment_intersection, Containment, Point, SegmentIntersection};
use pursuit::planner::plan_initialization;
use pursuit::sim::{run_game, Event, Game, GameConfig, GameStatus};
use pursuit::strategy::{
    evader_step, EvaderPolicy, EvaderView, GuardController, GuardPhase, LION_TOL,
};

fn report(name: &str, ok: bool, took: Duration, limit: Duration, detail: String) {
    let ok = ok && took <= limit;
    println!(
        "{} {name}: {detail} ({:.1}s, limit {}s)",
        if ok { "PASS" } else { "FAIL" },
        took.as_secs_f64(),
        limit.as_secs()
    );
    assert!(ok, "{name} failed: {detail}");
}

fn random_free_point(env: &Environment, region: &Region, rng: &mut impl Rng) -> Point {
    let vs = env.outer.vertices();
    let (x0, x1) = vs
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| {
            (a.min(p.x), b.max(p.x))
        });
    let (y0, y1) = vs
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| {
            (a.min(p.y), b.max(p.y))
        });
    loop {
        let p = Point::new(rng.gen_range(x0..x1), rng.gen_range(y0..y1));
        if region.contains(p) != Containment::Outside {
            return p;
        }
    }
}

#[test]
fn lion_monotone_and_within_budget() {
    let started = Instant::now();
    let (mut games, mut steps, mut bad_growth, mut over, mut worst) = (0, 0, 0, 0, 0.0f64);
    for s in 0..20u64 {
        let env = star_polygon(6 + (s as usize % 7), 6.0 + (s % 5) as f64 * 2.0, s).unwrap();
        for policy in [EvaderPolicy::Greedy, EvaderPolicy::Random] {
            let res = run_game(env.clone(), GameConfig::new(policy, s)).unwrap();
            games += 1;
            let diam = res.metrics.diameter;
            let budget = (diam * diam).ceil() + 2.0 * diam;
            for ev in res.trace.turns.iter().flat_map(|r| &r.events) {
                if let Event::LionStep {
                    radius_before,
                    radius_after,
                    ..
                } = *ev
                {
                    steps += 1;
                    if radius_after * radius_after < radius_before * radius_before + 1.0 - LION_TOL
                    {
                        bad_growth += 1;
                    }
                }
            }
            match res.capture_turn {
                Some(t) if t as f64 <= budget => worst = worst.max(t as f64 / budget),
                _ => over += 1,
            }
        }
    }
    report(
        "lion monotonicity and budget",
        games >= 40 && bad_growth == 0 && over == 0,
        started.elapsed(),
        Duration::from_secs(60),
        format!("{games} games on 20 polygons, {steps} lion steps, {bad_growth} growth failures, {over} over budget, worst turn/budget {worst:.3}"),
    );
}

#[test]
fn projection_is_non_expansive() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut pairs, mut bad, mut worst) = (0, 0, f64::NEG_INFINITY);
    for env in common::environments(10) {
        let t = Territory::whole(Arc::new(env.clone()));
        let plan = plan_initialization(&t, 0).unwrap();
        let proj = Projector::new(t.metric().clone(), plan.path.line.clone());
        for _ in 0..1000 {
            let z1 = random_free_point(&env, t.region(), &mut rng);
            let z2 = random_free_point(&env, t.region(), &mut rng);
            let along = (proj.param(z1) - proj.param(z2)).abs();
            let excess = along - t.distance(z1, z2);
            worst = worst.max(excess);
            if excess > 1e-6 {
                bad += 1;
            }
            pairs += 1;
        }
    }
    report(
        "projection non-expansive",
        pairs == 10_000 && bad == 0,
        started.elapsed(),
        Duration::from_secs(60),
        format!("{pairs} pairs on 10 environments, {bad} violations, max excess {worst:.2e}"),
    );
}

/// Locks a guard on the first wall with the evader standing still, then lets
/// the crosser loose. `Some(crossings)` when every crossing was caught on the
/// following turn.
fn locked_guard_trial(env: &Environment, seed: u64) -> Option<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let t = Territory::whole(Arc::new(env.clone()));
    let domain = t.domain().clone();
    let tol = domain.tol();
    let path = plan_initialization(&t, 0).unwrap().path.line;
    let mut guard = GuardController::new(0, path.clone(), t.metric().clone(), domain.clone());
    let mut e = random_free_point(env, &domain, &mut rng);
    let mut g = path.start();
    while guard.phase() != GuardPhase::Lock {
        g = guard.step(g, e).unwrap().to;
    }
    let walls = [path];
    let (mut crossed, mut crossings) = (false, 0);
    for _ in 0..2000 {
        if domain.distance(g, e) <= 1.0 + tol {
            return Some(crossings);
        }
        if crossed {
            return None;
        }
        g = guard.step(g, e).unwrap().to;
        let fields = [domain.field(&domain.anchor(g))];
        let view = EvaderView {
            domain: &domain,
            territory: None,
            pursuer_fields: &fields,
            locked_walls: &walls,
        };
        let next = evader_step(EvaderPolicy::AdversarialCrosser, &view, e, &mut rng);
        crossed = next != e
            && walls[0].segments().any(|(a, b)| {
                !matches!(
                    segment_intersection(e, next, a, b, tol),
                    SegmentIntersection::None
                )
            });
        crossings += crossed as usize;
        e = next;
    }
    None
}

#[test]
fn crossing_a_locked_guard_is_captured_next_turn() {
    let started = Instant::now();
    let envs = common::environments(5);
    let (mut trials, mut passed, mut crossings, mut game_crossings) = (0, 0, 0, 0);
    let mut per_env = Vec::new();
    for env in &envs {
        let mut env_pass = 0;
        for seed in 0..100 {
            trials += 1;
            if let Some(c) = locked_guard_trial(env, seed) {
                crossings += c;
                // The same clause inside full games.
                let res = run_game(
                    env.clone(),
                    GameConfig::new(EvaderPolicy::AdversarialCrosser, seed),
                )
                .unwrap();
                game_crossings += res.stats.crossings;
                if res.status == GameStatus::Captured
                    && res.stats.crossings == res.stats.crossings_captured_next_turn
                {
                    passed += 1;
                    env_pass += 1;
                }
            }
        }
        per_env.push(format!("{env_pass}/100"));
    }
    report(
        "guard captures after crossing",
        passed == trials && crossings > 0,
        started.elapsed(),
        Duration::from_secs(120),
        format!(
            "{passed}/{trials} trials over {} environments [{}], {crossings} crossings of a locked guard, {game_crossings} in full games",
            envs.len(),
            per_env.join(" ")
        ),
    );
}

#[test]
fn shortest_paths_match_grid_oracle() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (mut queries, mut bad, mut worst) = (0, 0, 0.0f64);
    let envs = common::environments(10);
    for env in &envs {
        assert!(env.k() <= 5);
        let region = Region::from_environment(env);
        let grid = common::Grid::new(env, env.d_min() / 4.0);
        let nodes = grid.free_nodes();
        for _ in 0..10 {
            let s = nodes[rng.gen_range(0..nodes.len())];
            let dist = grid.distances(s);
            for _ in 0..10 {
                let t = nodes[rng.gen_range(0..nodes.len())];
                let exact = region.distance(grid.point(s), grid.point(t));
                if exact < 1e-9 || !dist[t].is_finite() {
                    continue;
                }
                let rel = (dist[t] - exact).abs() / exact;
                worst = worst.max(rel);
                if rel > 0.02 {
                    bad += 1;
                }
                queries += 1;
            }
        }
    }
    report(
        "geodesic vs grid oracle",
        queries > 900 && bad == 0,
        started.elapsed(),
        Duration::from_secs(300),
        format!(
            "{queries} queries on {} environments, {bad} beyond 2%, worst {:.3}%",
            envs.len(),
            worst * 100.0
        ),
    );
}

#[test]
fn split_points_give_equal_distinct_touching_paths() {
    let started = Instant::now();
    let (mut found, mut bad) = (0, Vec::new());
    for env in common::environments(10) {
        let obstacles: Vec<_> = env.obstacles.iter().map(|o| o.boundary()).collect();
        for seed in 0..5 {
            for policy in [EvaderPolicy::Greedy, EvaderPolicy::Random] {
                let mut g = Game::new(env.clone(), GameConfig::new(policy, seed), None).unwrap();
                let diam = g.metrics().diameter;
                let tau = g.metrics().tolerance();
                let mut seen = usize::MAX;
                while g.status() == GameStatus::Running {
                    if g.stats().rounds != seen {
                        seen = g.stats().rounds;
                        let t = g.territory();
                        if matches!(t.region_type(), RegionType::One | RegionType::OnePrime) {
                            let sp = find_split_point(t).unwrap();
                            found += 1;
                            let [a, b] = &sp.paths;
                            let touches = |line: &pursuit::geom::Polyline| {
                                line.vertices()
                                    .iter()
                                    .any(|&v| obstacles.iter().any(|o| o.distance_to(v) <= tau))
                            };
                            let ok = (a.length - b.length).abs() <= 1e-6 * diam
                                && a.signature != b.signature
                                && touches(&a.line)
                                && touches(&b.line);
                            if !ok {
                                bad.push(format!("{} seed {seed} {policy} round {seen}", env.name));
                            }
                        }
                    }
                    g.step(None).unwrap();
                }
            }
        }
    }
    report(
        "split point paths",
        found > 0 && bad.is_empty(),
        started.elapsed(),
        Duration::from_secs(120),
        format!(
            "{found} split points, {} bad {:?}",
            bad.len(),
            bad.iter().take(3).collect::<Vec<_>>()
        ),
    );
}

struct CampaignRun {
    per_policy: Vec<(EvaderPolicy, CampaignSummary)>,
    took: Duration,
}

fn campaign() -> &'static CampaignRun {
    static RUN: OnceLock<CampaignRun> = OnceLock::new();
    RUN.get_or_init(|| {
        let started = Instant::now();
        let per_policy = EvaderPolicy::SCRIPTED
            .iter()
            .map(|&policy| {
                let mut spec = CampaignSpec::generated(vec![1, 2, 3, 5], 0..100, policy);
                spec.verify_replay = true;
                (policy, run_campaign(&spec).unwrap())
            })
            .collect();
        CampaignRun {
            per_policy,
            took: started.elapsed(),
        }
    })
}

#[test]
fn campaign_captures_within_bound() {
    let run = campaign();
    let (mut games, mut fails, mut ledger_over, mut stalls, mut worst) = (0, 0, 0, 0, 0.0f64);
    let mut lines = Vec::new();
    for (policy, s) in &run.per_policy {
        let f = s
            .rows
            .iter()
            .filter(|r| !matches!(r.status, RowStatus::Pass | RowStatus::ReplayMismatch))
            .count();
        games += s.rows.len();
        fails += f;
        for r in &s.rows {
            if r.ledger_transitions > 2 * r.k {
                ledger_over += 1;
            }
            if !r.progress_ok {
                stalls += 1;
            }
            if let Some(t) = r.capture_turn {
                worst = worst.max(t as f64 / r.budget);
            }
        }
        lines.push(format!("{policy} {}/{}", s.rows.len() - f, s.rows.len()));
    }
    report(
        "campaign",
        games == 1200 && fails == 0 && ledger_over == 0 && stalls == 0,
        run.took,
        Duration::from_secs(600),
        format!(
            "{games} games [{}], ledger over 2k: {ledger_over}, progress stalls: {stalls}, worst turn/budget {worst:.4}",
            lines.join(", ")
        ),
    );
}

#[test]
fn campaign_traces_replay_identically() {
    let run = campaign();
    let rows: Vec<_> = run.per_policy.iter().flat_map(|(_, s)| &s.rows).collect();
    let mismatched: Vec<_> = rows
        .iter()
        .filter(|r| r.status == RowStatus::ReplayMismatch)
        .collect();
    let replayed = rows.iter().filter(|r| r.status == RowStatus::Pass).count();
    report(
        "replay determinism",
        mismatched.is_empty() && replayed == rows.len(),
        run.took,
        Duration::from_secs(600),
        format!(
            "{replayed}/{} traces replayed with identical hashes, {} mismatches {:?}",
            rows.len(),
            mismatched.len(),
            mismatched
                .iter()
                .take(3)
                .map(|r| format!("{} seed {}", r.env, r.seed))
                .collect::<Vec<_>>()
        ),
    );
}
