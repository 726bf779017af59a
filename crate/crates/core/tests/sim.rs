use std::sync::Arc;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use http_body_util::BodyExt;
use proptest::prelude::*;
use serde_json::{json, Value};
use tokio::io::{AsyncReadExt, AsyncWriteExt};
use tower::ServiceExt;

use pursuit::cli::{main_with, EXIT_BOUND, EXIT_GEN, EXIT_INPUT, EXIT_OK};
use pursuit::environment::Environment;
use pursuit::gen::{generate, GenParams};
use pursuit::geom::Point;
use pursuit::service::{router, SessionManager};
use pursuit::sim::{check_bound, replay, run_game, Game, GameConfig, GameStatus, SimError, Trace};
use pursuit::strategy::EvaderPolicy;

fn cli(args: &[&str]) -> i32 {
    main_with(std::iter::once("pursuit").chain(args.iter().copied()))
}

#[test]
fn games_on_the_reference_squares() {
    let res = run_game(
        Environment::env0(),
        GameConfig::new(EvaderPolicy::Greedy, 0),
    )
    .unwrap();
    assert_eq!(res.status, GameStatus::Captured);
    assert_eq!(res.stats.rounds, 0);
    assert!(res.stats.lion_start_turn == Some(0));

    for seed in 0..20 {
        let res = run_game(
            Environment::env1(),
            GameConfig::new(EvaderPolicy::Random, seed),
        )
        .unwrap();
        assert_eq!(res.status, GameStatus::Captured);
        assert!(check_bound(&res, 25.0).ok);
        // After the first guard the obstacle is safe or gone and the rest is a lion's game.
        if res.stats.rounds > 0 {
            assert!(res.stats.ledger_transitions >= 1);
            assert_eq!(
                res.stats.region_types[1],
                pursuit::geodesic::RegionType::Zero
            );
        }
        assert!(res.stats.rounds <= 2);
    }
}

#[test]
fn turn_cap_stops_the_game() {
    let mut cfg = GameConfig::new(EvaderPolicy::Greedy, 1);
    cfg.turn_cap = Some(3);
    let res = run_game(Environment::env1(), cfg).unwrap();
    assert_eq!(res.status, GameStatus::TurnCap);
    assert_eq!(res.turns, 3);
    assert!(!check_bound(&res, 25.0).ok);
}

#[test]
fn human_moves_are_validated_without_side_effects() {
    let mut g = Game::new(
        Environment::env1(),
        GameConfig::new(EvaderPolicy::Human, 0),
        Some(Point::new(9.0, 9.0)),
    )
    .unwrap();
    let t0 = g.turn();
    let hash = g.trace().final_hash().to_string();
    assert!(matches!(
        g.step(Some(Point::new(9.0, 7.0))),
        Err(SimError::IllegalMove { .. })
    ));
    assert!(matches!(
        g.step(Some(Point::new(f64::NAN, 9.0))),
        Err(SimError::IllegalMove { .. })
    ));
    assert_eq!(g.turn(), t0);
    assert_eq!(g.trace().final_hash(), hash);
    g.step(Some(Point::new(9.0, 8.5))).unwrap();
    assert_eq!(g.turn(), t0 + 1);
    assert!(Game::new(
        Environment::env1(),
        GameConfig::new(EvaderPolicy::Human, 0),
        Some(Point::new(5.0, 5.0))
    )
    .is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn traces_replay_after_a_round_trip(seed in 0u64..1000, k in 1usize..4, policy in 0usize..3) {
        let env = generate(&GenParams::with_k(k), seed).unwrap();
        let res = run_game(env, GameConfig::new(EvaderPolicy::SCRIPTED[policy], seed)).unwrap();
        let again = run_game(res.trace.header.env.clone(), GameConfig::new(EvaderPolicy::SCRIPTED[policy], seed)).unwrap();
        prop_assert_eq!(res.trace.final_hash(), again.trace.final_hash());
        let back = Trace::read_jsonl(res.trace.to_jsonl().as_bytes()).unwrap();
        prop_assert_eq!(&back, &res.trace);
        let rep = replay(&back).unwrap();
        prop_assert!(rep.ok(), "{:?}", rep);
        prop_assert_eq!(rep.final_hash, res.trace.final_hash());
    }
}

#[test]
fn cli_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = |n: &str| dir.path().join(n).to_str().unwrap().to_string();
    let (env, trace, csv, traces) = (
        path("env.json"),
        path("t.jsonl"),
        path("c.csv"),
        path("traces"),
    );

    assert_eq!(
        cli(&["gen", "--k", "2", "--seed", "4", "--out", &env]),
        EXIT_OK
    );
    assert_eq!(
        cli(&["run", "--env", &env, "--policy", "random", "--seed", "3", "--out", &trace]),
        EXIT_OK
    );
    assert_eq!(cli(&["replay", &trace]), EXIT_OK);
    assert_eq!(cli(&["replay", &trace, "--env", &env]), EXIT_OK);
    assert_eq!(cli(&["replay", &trace, "--env", "env1"]), EXIT_INPUT);
    assert_eq!(
        cli(&["run", "--env", "env1", "--turn-cap", "2"]),
        EXIT_BOUND
    );
    assert_eq!(cli(&["run", "--env", "missing.json"]), EXIT_INPUT);
    assert_eq!(
        cli(&["run", "--env", "env1", "--policy", "sideways"]),
        EXIT_INPUT
    );
    assert_eq!(cli(&["gen", "--k", "50", "--max-attempts", "50"]), EXIT_GEN);

    let mut text = std::fs::read_to_string(&trace).unwrap();
    text = text.replacen("\"t\":1,", "\"t\":7,", 1);
    std::fs::write(&trace, text).unwrap();
    assert_eq!(cli(&["replay", &trace]), EXIT_BOUND);
    std::fs::write(&trace, "not json\n").unwrap();
    assert_eq!(cli(&["replay", &trace]), EXIT_INPUT);

    let args = [
        "campaign",
        "--k",
        "1,2",
        "--seeds",
        "3",
        "--jobs",
        "2",
        "--verify-replay",
        "--out",
        &csv,
        "--traces",
        &traces,
    ];
    assert_eq!(cli(&args), EXIT_OK);
    let rows = std::fs::read_to_string(&csv).unwrap();
    let mut lines = rows.lines();
    assert_eq!(
        lines.next(),
        Some("env,k,diam,seed,capture_turn,budget,margin,status")
    );
    assert_eq!(lines.clone().count(), 6);
    assert!(lines.all(|l| l.ends_with(",pass")));
    assert_eq!(std::fs::read_dir(&traces).unwrap().count(), 6);
    assert_eq!(cli(&["campaign", "--seeds", "0"]), EXIT_INPUT);
    assert_eq!(
        cli(&[
            "campaign",
            "--env",
            "env1",
            "--repetitions",
            "2",
            "--turn-cap",
            "2",
            "--out",
            &csv
        ]),
        EXIT_BOUND
    );
}

async fn call(
    app: &axum::Router,
    method: &str,
    uri: &str,
    body: Option<Value>,
) -> (StatusCode, Value) {
    let req = Request::builder()
        .method(method)
        .uri(uri)
        .header("content-type", "application/json");
    let req = req
        .body(body.map_or(Body::empty(), |b| Body::from(b.to_string())))
        .unwrap();
    let res = app.clone().oneshot(req).await.unwrap();
    let status = res.status();
    let bytes = res.into_body().collect().await.unwrap().to_bytes();
    (
        status,
        serde_json::from_slice(&bytes)
            .unwrap_or(Value::String(String::from_utf8_lossy(&bytes).into())),
    )
}

#[tokio::test(flavor = "multi_thread")]
async fn http_session_plays_and_exports_a_replayable_trace() {
    let app = router(Arc::new(SessionManager::new()));
    let (s, st) = call(
        &app,
        "POST",
        "/sessions",
        Some(json!({"env": "env1", "seed": 3})),
    )
    .await;
    assert_eq!(s, StatusCode::CREATED);
    assert_eq!(st["status"], "awaiting_placement");
    let id = st["id"].as_u64().unwrap();
    let uri = format!("/sessions/{id}/evader-move");

    let (s, _) = call(&app, "POST", &uri, Some(json!({"x": 5.0, "y": 5.0}))).await;
    assert_eq!(s, StatusCode::BAD_REQUEST);
    let (s, st) = call(&app, "POST", &uri, Some(json!({"x": 9.5, "y": 9.5}))).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(st["status"], "running");

    let (_, before) = call(&app, "GET", &format!("/sessions/{id}/state"), None).await;
    let (s, _) = call(&app, "POST", &uri, Some(json!({"x": 0.0, "y": 0.0}))).await;
    assert_eq!(s, StatusCode::BAD_REQUEST);
    let (_, after) = call(&app, "GET", &format!("/sessions/{id}/state"), None).await;
    assert_eq!(before, after);

    let mut y = 9.5;
    loop {
        let (_, st) = call(&app, "GET", &format!("/sessions/{id}/state"), None).await;
        if st["status"] != "running" {
            assert_eq!(st["status"], "captured");
            break;
        }
        y = (y - 0.9f64).max(0.5);
        let (s, _) = call(&app, "POST", &uri, Some(json!({"x": 9.5, "y": y}))).await;
        assert_eq!(s, StatusCode::OK);
    }
    let (s, _) = call(&app, "POST", &uri, Some(json!({"x": 9.5, "y": y}))).await;
    assert_eq!(s, StatusCode::CONFLICT);

    let (s, text) = call(&app, "GET", &format!("/sessions/{id}/trace"), None).await;
    assert_eq!(s, StatusCode::OK);
    let Value::String(text) = text else {
        panic!("trace is not text")
    };
    let trace = Trace::read_jsonl(text.as_bytes()).unwrap();
    assert_eq!(trace.header.policy, EvaderPolicy::Human);
    assert!(replay(&trace).unwrap().ok());

    let (s, _) = call(&app, "GET", "/sessions/999/state", None).await;
    assert_eq!(s, StatusCode::NOT_FOUND);
    let (s, _) = call(
        &app,
        "POST",
        "/sessions/999/evader-move",
        Some(json!({"x": 1.0, "y": 1.0})),
    )
    .await;
    assert_eq!(s, StatusCode::NOT_FOUND);
    let (s, _) = call(&app, "POST", "/sessions", Some(json!({"env": "env9"}))).await;
    assert_eq!(s, StatusCode::BAD_REQUEST);
}

/// Reads one unmasked server frame.
async fn read_frame(sock: &mut tokio::net::TcpStream) -> (u8, Vec<u8>) {
    let mut h = [0u8; 2];
    sock.read_exact(&mut h).await.unwrap();
    let len = match h[1] & 0x7f {
        126 => {
            let mut b = [0u8; 2];
            sock.read_exact(&mut b).await.unwrap();
            u16::from_be_bytes(b) as usize
        }
        127 => {
            let mut b = [0u8; 8];
            sock.read_exact(&mut b).await.unwrap();
            u64::from_be_bytes(b) as usize
        }
        n => n as usize,
    };
    let mut payload = vec![0u8; len];
    sock.read_exact(&mut payload).await.unwrap();
    (h[0] & 0x0f, payload)
}

#[tokio::test(flavor = "multi_thread")]
async fn websocket_streams_turn_records() {
    let manager = Arc::new(SessionManager::new());
    let listener = tokio::net::TcpListener::bind("127.0.0.1:0").await.unwrap();
    let addr = listener.local_addr().unwrap();
    let app = router(manager.clone());
    tokio::spawn(async move { axum::serve(listener, app).await });

    let st = manager
        .create(serde_json::from_value(json!({"env": "env1"})).unwrap())
        .unwrap();
    manager
        .evader_move(
            st.id,
            serde_json::from_value(json!({"x": 9.5, "y": 9.5})).unwrap(),
        )
        .unwrap();

    let mut sock = tokio::net::TcpStream::connect(addr).await.unwrap();
    let req = format!(
        "GET /sessions/{}/events HTTP/1.1\r\nHost: {addr}\r\nUpgrade: websocket\r\nConnection: Upgrade\r\n\
         Sec-WebSocket-Key: dGhlIHNhbXBsZSBub25jZQ==\r\nSec-WebSocket-Version: 13\r\n\r\n",
        st.id
    );
    sock.write_all(req.as_bytes()).await.unwrap();
    let mut head = Vec::new();
    while !head.ends_with(b"\r\n\r\n") {
        let mut b = [0u8; 1];
        sock.read_exact(&mut b).await.unwrap();
        head.push(b[0]);
    }
    assert!(String::from_utf8_lossy(&head).starts_with("HTTP/1.1 101"));

    let (op, first) = read_frame(&mut sock).await;
    assert_eq!(op, 1);
    let rec: Value = serde_json::from_slice(&first).unwrap();
    assert_eq!(rec["t"], 0);

    let m = manager.clone();
    tokio::task::spawn_blocking(move || {
        m.evader_move(
            st.id,
            serde_json::from_value(json!({"x": 9.5, "y": 8.8})).unwrap(),
        )
    })
    .await
    .unwrap()
    .unwrap();
    let (_, next) = read_frame(&mut sock).await;
    let rec: Value = serde_json::from_slice(&next).unwrap();
    assert_eq!(rec["t"], 1);
    assert!(rec["events"].is_array());
}
