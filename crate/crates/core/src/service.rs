//! HTTP and WebSocket sessions for a human evader.
//!
//! ```text
//! POST /sessions                    {"env": "env1"} or {"env": {...}}, optional "seed"
//! POST /sessions/{id}/evader-move   {"x": .., "y": ..}; the first move places the evader
//! GET  /sessions/{id}/state
//! GET  /sessions/{id}/trace         JSON lines
//! GET  /sessions/{id}/events        WebSocket, one trace record per message
//! ```

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use axum::extract::ws::{Message, WebSocket, WebSocketUpgrade};
use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use tokio::sync::broadcast;

use crate::environment::Environment;
use crate::geom::Point;
use crate::planner::ObstacleState;
use crate::sim::{Game, GameConfig, GameStatus, Phase, SimError, TurnRecord, BOUND_CONSTANT};
use crate::strategy::EvaderPolicy;

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum EnvChoice {
    Named(String),
    Inline(Environment),
}

#[derive(Debug, Clone, Deserialize)]
pub struct CreateSession {
    pub env: EnvChoice,
    #[serde(default)]
    pub seed: u64,
    pub turn_cap: Option<u64>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Move {
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionState {
    pub id: u64,
    /// `awaiting_placement`, `running`, `captured` or `turn_cap`.
    pub status: String,
    pub turn: u64,
    pub turn_cap: Option<u64>,
    pub pursuers: Option<[Point; 3]>,
    pub evader: Option<Point>,
    pub phases: Option<[Phase; 3]>,
    pub region: Option<String>,
    pub ledger: Vec<ObstacleState>,
    pub env: Environment,
}

#[derive(Debug, Serialize)]
struct ErrorBody {
    error: String,
}

#[derive(Debug)]
pub enum ServiceError {
    NotFound,
    BadRequest(String),
    Conflict(String),
}

impl IntoResponse for ServiceError {
    fn into_response(self) -> Response {
        let (code, msg) = match self {
            ServiceError::NotFound => (StatusCode::NOT_FOUND, "no such session".to_string()),
            ServiceError::BadRequest(m) => (StatusCode::BAD_REQUEST, m),
            ServiceError::Conflict(m) => (StatusCode::CONFLICT, m),
        };
        (code, Json(ErrorBody { error: msg })).into_response()
    }
}

impl From<SimError> for ServiceError {
    fn from(e: SimError) -> Self {
        match e {
            SimError::IllegalMove { .. } => ServiceError::BadRequest(e.to_string()),
            SimError::GameOver => ServiceError::Conflict(e.to_string()),
            other => ServiceError::BadRequest(other.to_string()),
        }
    }
}

struct Session {
    env: Environment,
    cfg: GameConfig,
    game: Option<Game>,
    events: broadcast::Sender<String>,
}

impl Session {
    fn state(&self, id: u64) -> SessionState {
        match &self.game {
            None => SessionState {
                id,
                status: "awaiting_placement".into(),
                turn: 0,
                turn_cap: None,
                pursuers: None,
                evader: None,
                phases: None,
                region: None,
                ledger: vec![ObstacleState::Dangerous; self.env.k()],
                env: self.env.clone(),
            },
            Some(g) => SessionState {
                id,
                status: match g.status() {
                    GameStatus::Running => "running",
                    GameStatus::Captured => "captured",
                    GameStatus::TurnCap => "turn_cap",
                }
                .into(),
                turn: g.turn(),
                turn_cap: Some(g.turn_cap()),
                pursuers: Some(g.pursuers()),
                evader: Some(g.evader()),
                phases: Some([
                    g.roles()[0].phase(),
                    g.roles()[1].phase(),
                    g.roles()[2].phase(),
                ]),
                region: Some(g.territory().region_type().to_string()),
                ledger: g.ledger().states.clone(),
                env: self.env.clone(),
            },
        }
    }

    fn publish(&self, rec: &TurnRecord) {
        if let Ok(text) = serde_json::to_string(rec) {
            let _ = self.events.send(text);
        }
    }

    /// Places the evader on the first call and plays one turn afterwards.
    fn apply(&mut self, p: Point) -> Result<(), ServiceError> {
        match &mut self.game {
            None => {
                let game =
                    Game::new(self.env.clone(), self.cfg.clone(), Some(p)).map_err(|_| {
                        ServiceError::BadRequest(format!(
                            "({}, {}) is not in the free space",
                            p.x, p.y
                        ))
                    })?;
                self.publish(&game.trace().turns[0]);
                self.game = Some(game);
            }
            Some(g) => {
                let rec = g.step(Some(p))?.clone();
                self.publish(&rec);
            }
        }
        Ok(())
    }
}

/// All live sessions. Each session is locked while a request works on it.
#[derive(Default)]
pub struct SessionManager {
    next: AtomicU64,
    sessions: Mutex<HashMap<u64, Arc<Mutex<Session>>>>,
}

impl SessionManager {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn create(&self, req: CreateSession) -> Result<SessionState, ServiceError> {
        let env = match req.env {
            EnvChoice::Named(n) if n == "env0" => Environment::env0(),
            EnvChoice::Named(n) if n == "env1" => Environment::env1(),
            EnvChoice::Named(n) => {
                return Err(ServiceError::BadRequest(format!(
                    "unknown environment `{n}`"
                )))
            }
            EnvChoice::Inline(e) => e,
        };
        env.ensure_valid()
            .map_err(|e| ServiceError::BadRequest(e.to_string()))?;
        env.metrics()
            .map_err(|e| ServiceError::BadRequest(e.to_string()))?;
        let cfg = GameConfig {
            policy: EvaderPolicy::Human,
            seed: req.seed,
            turn_cap: req.turn_cap,
            bound_constant: BOUND_CONSTANT,
        };
        let id = self.next.fetch_add(1, Ordering::Relaxed) + 1;
        let (events, _) = broadcast::channel(1024);
        let s = Session {
            env,
            cfg,
            game: None,
            events,
        };
        let state = s.state(id);
        self.sessions
            .lock()
            .unwrap()
            .insert(id, Arc::new(Mutex::new(s)));
        Ok(state)
    }

    fn get(&self, id: u64) -> Result<Arc<Mutex<Session>>, ServiceError> {
        self.sessions
            .lock()
            .unwrap()
            .get(&id)
            .cloned()
            .ok_or(ServiceError::NotFound)
    }

    pub fn state(&self, id: u64) -> Result<SessionState, ServiceError> {
        Ok(self.get(id)?.lock().unwrap().state(id))
    }

    /// Applies an evader move. Rejected moves leave the session unchanged.
    pub fn evader_move(&self, id: u64, mv: Move) -> Result<SessionState, ServiceError> {
        let s = self.get(id)?;
        let mut s = s.lock().unwrap();
        s.apply(Point::new(mv.x, mv.y))?;
        Ok(s.state(id))
    }

    pub fn trace_jsonl(&self, id: u64) -> Result<String, ServiceError> {
        let s = self.get(id)?;
        let s = s.lock().unwrap();
        match &s.game {
            Some(g) => Ok(g.trace().to_jsonl()),
            None => Err(ServiceError::Conflict("evader not placed yet".into())),
        }
    }

    /// Records so far plus a receiver for later ones.
    fn subscribe(
        &self,
        id: u64,
    ) -> Result<(Vec<String>, broadcast::Receiver<String>), ServiceError> {
        let s = self.get(id)?;
        let s = s.lock().unwrap();
        let backlog = s
            .game
            .iter()
            .flat_map(|g| g.trace().turns.iter())
            .filter_map(|r| serde_json::to_string(r).ok())
            .collect();
        Ok((backlog, s.events.subscribe()))
    }
}

type Shared = Arc<SessionManager>;

async fn blocking<T: Send + 'static>(
    f: impl FnOnce() -> Result<T, ServiceError> + Send + 'static,
) -> Result<T, ServiceError> {
    tokio::task::spawn_blocking(f)
        .await
        .map_err(|e| ServiceError::BadRequest(e.to_string()))?
}

async fn create(
    State(m): State<Shared>,
    Json(req): Json<CreateSession>,
) -> Result<impl IntoResponse, ServiceError> {
    let st = blocking(move || m.create(req)).await?;
    Ok((StatusCode::CREATED, Json(st)))
}

async fn evader_move(
    State(m): State<Shared>,
    Path(id): Path<u64>,
    Json(mv): Json<Move>,
) -> Result<Json<SessionState>, ServiceError> {
    Ok(Json(blocking(move || m.evader_move(id, mv)).await?))
}

async fn state(
    State(m): State<Shared>,
    Path(id): Path<u64>,
) -> Result<Json<SessionState>, ServiceError> {
    Ok(Json(m.state(id)?))
}

async fn trace(State(m): State<Shared>, Path(id): Path<u64>) -> Result<String, ServiceError> {
    m.trace_jsonl(id)
}

async fn events(
    State(m): State<Shared>,
    Path(id): Path<u64>,
    ws: WebSocketUpgrade,
) -> Result<Response, ServiceError> {
    let (backlog, rx) = m.subscribe(id)?;
    Ok(ws.on_upgrade(move |socket| stream_events(socket, backlog, rx)))
}

async fn stream_events(
    mut socket: WebSocket,
    backlog: Vec<String>,
    mut rx: broadcast::Receiver<String>,
) {
    for text in backlog {
        if socket.send(Message::Text(text.into())).await.is_err() {
            return;
        }
    }
    loop {
        match rx.recv().await {
            Ok(text) => {
                if socket.send(Message::Text(text.into())).await.is_err() {
                    return;
                }
            }
            Err(broadcast::error::RecvError::Lagged(_)) => continue,
            Err(broadcast::error::RecvError::Closed) => return,
        }
    }
}

pub fn router(manager: Shared) -> Router {
    Router::new()
        .route("/sessions", post(create))
        .route("/sessions/{id}/evader-move", post(evader_move))
        .route("/sessions/{id}/state", get(state))
        .route("/sessions/{id}/trace", get(trace))
        .route("/sessions/{id}/events", get(events))
        .with_state(manager)
}

pub async fn serve(addr: &str) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    eprintln!("listening on {}", listener.local_addr()?);
    axum::serve(listener, router(Arc::new(SessionManager::new()))).await
}
