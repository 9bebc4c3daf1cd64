//! HTTP sessions for interactive play.
//!
//! | method | path | |
//! |---|---|---|
//! | POST | `/v1/games` | create a session |
//! | GET | `/v1/games/{id}` | public state |
//! | POST | `/v1/games/{id}/moves` | human move, engine reply included |
//! | GET | `/v1/games/{id}/record` | game record text |
//! | GET | `/v1/games/{id}/hint` | suggested move for the human |
//!
//! Bodies are JSON. Errors come back as `{"error": kind, "message": text}`
//! with 400 (bad request), 404 (unknown session), 409 (wrong turn, game
//! over, stale `expected_ply`, session busy) or 422 (illegal move).

use std::collections::HashMap;
use std::io;
use std::net::SocketAddr;
use std::path::{Path as FsPath, PathBuf};
use std::sync::{Arc, Mutex, RwLock, TryLockError};
use std::time::{SystemTime, UNIX_EPOCH};

use axum::extract::{Path, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use rand::SeedableRng;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::animal::{Animal, AnimalSpec};
use crate::bob::partition_for;
use crate::engine::{BoardBounds, EngineError, GameRecord, GameState, Move, Occupant, Side};
use crate::harness::{Rng, Strategy, StrategySpec, RNG_ALGORITHM};

/// Largest board area on which the solver plays or hints.
pub const SOLVER_CELL_LIMIT: usize = 25;

/// Environment variable holding the bind address, e.g. `0.0.0.0:8080`.
pub const ADDR_ENV: &str = "CANNIBAL_ADDR";
pub const DEFAULT_ADDR: &str = "127.0.0.1:8080";

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    kind: String,
    message: String,
}

impl ApiError {
    fn new(status: StatusCode, kind: &str, message: impl Into<String>) -> Self {
        ApiError { status, kind: kind.to_owned(), message: message.into() }
    }

    fn bad(kind: &str, message: impl Into<String>) -> Self {
        Self::new(StatusCode::BAD_REQUEST, kind, message)
    }

    fn conflict(kind: &str, message: impl Into<String>) -> Self {
        Self::new(StatusCode::CONFLICT, kind, message)
    }

    fn engine(e: &EngineError) -> Self {
        let status = match e {
            EngineError::NotYourTurn(_) | EngineError::GameOver(_) => StatusCode::CONFLICT,
            _ => StatusCode::UNPROCESSABLE_ENTITY,
        };
        Self::new(status, e.reason(), e.to_string())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(json!({ "error": self.kind, "message": self.message }))).into_response()
    }
}

type ApiResult<T> = Result<T, ApiError>;

fn now() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs())
}

struct Session {
    id: String,
    state: GameState,
    human: Side,
    engine_spec: StrategySpec,
    engine: Box<dyn Strategy>,
    rng: Rng,
    seed: u64,
    created: u64,
    updated: u64,
    last_engine_move: Option<Move>,
    engine_error: Option<String>,
}

impl Session {
    /// The engine plays while it is its turn. A strategy failure is kept on
    /// the session instead of failing the request.
    fn engine_reply(&mut self) {
        if self.state.is_over() || self.state.to_move() == self.human {
            return;
        }
        match self.engine.next_move(&self.state, &mut self.rng) {
            Ok(mv) => match self.state.apply(mv) {
                Ok(()) => self.last_engine_move = Some(mv),
                Err(e) => self.engine_error = Some(format!("IllegalMove: {e}")),
            },
            Err(e) => self.engine_error = Some(format!("{}: {e}", e.kind())),
        }
    }

    fn record(&self) -> GameRecord {
        GameRecord::from_state(&self.state).with_seed(Some(self.seed), Some(RNG_ALGORITHM))
    }

    /// Record text plus the comment lines needed to restore the session.
    fn persisted(&self) -> String {
        format!(
            "# session {}\n# human {}\n# engine {}\n# created {}\n{}",
            self.id,
            self.human,
            self.engine_spec,
            self.created,
            self.record().encode()
        )
    }

    fn public(&self) -> Value {
        let mut cells: Vec<Value> = Vec::new();
        let mut occ: Vec<_> = self.state.occupancy().collect();
        occ.sort_by_key(|&(c, o)| (ply_of(o), c.y, c.x));
        for (c, o) in occ {
            cells.push(json!({ "x": c.x, "y": c.y, "side": o.side(), "ply": ply_of(o) }));
        }
        let copies: Vec<Value> = self
            .state
            .history()
            .iter()
            .enumerate()
            .filter_map(|(ply, m)| match m {
                Move::Bob(p) => Some(json!({
                    "orientation": p.orientation.index(),
                    "dx": p.offset.x,
                    "dy": p.offset.y,
                    "ply": ply,
                })),
                _ => None,
            })
            .collect();
        let partition = match self.engine_spec {
            StrategySpec::BobPairing => partition_for(self.state.animal()).ok().map(|p| {
                json!({ "block_w": p.block_w, "block_h": p.block_h, "shift_t": p.shift_t,
                        "origin": { "x": p.origin.x, "y": p.origin.y } })
            }),
            _ => None,
        };
        json!({
            "session_id": self.id,
            "animal": self.state.animal().spec().to_string(),
            "animal_cells": self.state.animal().shape().cells().iter().map(|c| json!({"x": c.x, "y": c.y})).collect::<Vec<_>>(),
            "orientations": self.state.all_orientation_elements().iter().map(|e| e.index()).collect::<Vec<_>>(),
            "board": self.state.bounds().to_string(),
            "human_side": self.human,
            "engine": self.engine_spec.to_string(),
            "to_move": (!self.state.is_over()).then(|| self.state.to_move()),
            "status": self.state.status().to_string(),
            "winner": self.state.status().winner(),
            "ply": self.state.ply(),
            "alice_move_count": self.state.alice_move_count(),
            "bob_move_count": self.state.ply() - self.state.alice_move_count(),
            "cells": cells,
            "copies": copies,
            "last_engine_move": self.last_engine_move.map(|m| m.to_string()),
            "engine_error": self.engine_error,
            "partition": partition,
            "created": self.created,
            "updated": self.updated,
        })
    }

    /// Replays the record and compares it with the live state.
    fn revalidate(&self) -> ApiResult<()> {
        let replayed = self.record().replay().map_err(|e| internal(format!("record does not replay: {e}")))?;
        let mut a: Vec<_> = self.state.occupancy().collect();
        let mut b: Vec<_> = replayed.occupancy().collect();
        a.sort_by_key(|&(c, _)| c);
        b.sort_by_key(|&(c, _)| c);
        if a != b || replayed.status() != self.state.status() {
            return Err(internal("replayed record differs from the session state"));
        }
        Ok(())
    }
}

fn ply_of(o: Occupant) -> u32 {
    match o {
        Occupant::Alice(p) | Occupant::Bob(p) => p,
    }
}

fn internal(msg: impl Into<String>) -> ApiError {
    ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "Internal", msg)
}

fn build_engine(spec: &StrategySpec, animal: &Animal, bounds: BoardBounds) -> ApiResult<Box<dyn Strategy>> {
    if matches!(spec, StrategySpec::AliceSolver | StrategySpec::BobSolver)
        && bounds.rect().is_none_or(|r| r.area() > SOLVER_CELL_LIMIT)
    {
        return Err(ApiError::bad(
            "BoardTooLarge",
            format!("the solver only plays on bounded boards of at most {SOLVER_CELL_LIMIT} cells"),
        ));
    }
    spec.build(animal, bounds).map_err(|e| ApiError::bad(e.kind(), e.to_string()))
}

type SessionMap = HashMap<String, Arc<Mutex<Session>>>;

struct Inner {
    sessions: RwLock<SessionMap>,
    records_dir: Option<PathBuf>,
}

/// Shared server state: the session table and the optional record folder.
#[derive(Clone)]
pub struct AppState(Arc<Inner>);

impl AppState {
    pub fn in_memory() -> Self {
        AppState(Arc::new(Inner { sessions: RwLock::new(HashMap::new()), records_dir: None }))
    }

    /// Sessions are persisted as `<id>.record` files in `dir`; those already
    /// there are restored.
    pub fn with_records_dir(dir: impl Into<PathBuf>) -> io::Result<Self> {
        let dir = dir.into();
        std::fs::create_dir_all(&dir)?;
        let mut sessions = HashMap::new();
        for entry in std::fs::read_dir(&dir)? {
            let path = entry?.path();
            if path.extension().is_some_and(|e| e == "record") {
                let text = std::fs::read_to_string(&path)?;
                match restore(&text) {
                    Ok(s) => {
                        sessions.insert(s.id.clone(), Arc::new(Mutex::new(s)));
                    }
                    Err(e) => eprintln!("skipping {}: {}", path.display(), e.message),
                }
            }
        }
        Ok(AppState(Arc::new(Inner { sessions: RwLock::new(sessions), records_dir: Some(dir) })))
    }

    pub fn session_count(&self) -> usize {
        self.0.sessions.read().expect("session table").len()
    }

    fn get(&self, id: &str) -> ApiResult<Arc<Mutex<Session>>> {
        self.0
            .sessions
            .read()
            .expect("session table")
            .get(id)
            .cloned()
            .ok_or_else(|| ApiError::new(StatusCode::NOT_FOUND, "UnknownSession", format!("no session {id:?}")))
    }

    fn persist(&self, s: &Session) -> ApiResult<()> {
        let Some(dir) = &self.0.records_dir else {
            return Ok(());
        };
        write_atomic(&dir.join(format!("{}.record", s.id)), &s.persisted())
            .map_err(|e| internal(format!("cannot persist record: {e}")))
    }
}

fn write_atomic(path: &FsPath, text: &str) -> io::Result<()> {
    let tmp = path.with_extension("record.tmp");
    std::fs::write(&tmp, text)?;
    std::fs::rename(tmp, path)
}

/// Rebuilds a session from its persisted record, replaying the engine so its
/// internal state and generator match the original run.
fn restore(text: &str) -> ApiResult<Session> {
    let mut meta = HashMap::new();
    for line in text.lines() {
        if let Some(rest) = line.strip_prefix("# ") {
            if let Some((k, v)) = rest.split_once(' ') {
                meta.insert(k.to_owned(), v.trim().to_owned());
            }
        }
    }
    let field = |k: &str| meta.get(k).cloned().ok_or_else(|| ApiError::bad("BadRecord", format!("missing {k}")));
    let rec = GameRecord::parse(text).map_err(|e| ApiError::bad("BadRecord", e.to_string()))?;
    let human = match field("human")?.as_str() {
        "alice" => Side::Alice,
        "bob" => Side::Bob,
        other => return Err(ApiError::bad("BadRecord", format!("bad human side {other:?}"))),
    };
    let engine_spec: StrategySpec = field("engine")?.parse().map_err(|e: crate::harness::StrategyError| ApiError::bad("BadRecord", e.to_string()))?;
    let animal = Animal::new(rec.animal.clone()).map_err(|e| ApiError::bad("BadRecord", e.to_string()))?;
    let seed = rec.seed.unwrap_or(0);
    let mut engine = build_engine(&engine_spec, &animal, rec.bounds)?;
    let mut rng = Rng::seed_from_u64(seed);
    let mut state = GameState::new(animal, rec.bounds).map_err(|e| ApiError::bad("BadRecord", e.to_string()))?;
    let mut last_engine_move = None;
    for &mv in &rec.moves {
        if mv.mover() != human {
            // Keeps stateful strategies and the generator in step.
            let _ = engine.next_move(&state, &mut rng);
            last_engine_move = Some(mv);
        }
        state.apply(mv).map_err(|e| ApiError::bad("BadRecord", e.to_string()))?;
    }
    let created = field("created").ok().and_then(|c| c.parse().ok()).unwrap_or(0);
    Ok(Session {
        id: field("session")?,
        state: state.with_move_budget(rec.budget),
        human,
        engine_spec,
        engine,
        rng,
        seed,
        created,
        updated: now(),
        last_engine_move,
        engine_error: None,
    })
}

#[derive(Deserialize)]
struct CreateGame {
    animal: String,
    #[serde(default)]
    board: Option<String>,
    human_side: Side,
    engine: String,
    #[serde(default)]
    seed: Option<u64>,
    #[serde(default)]
    move_budget: Option<usize>,
}

async fn create_game(State(app): State<AppState>, Json(req): Json<CreateGame>) -> ApiResult<Response> {
    let spec: AnimalSpec = req.animal.parse().map_err(|e: crate::animal::AnimalError| ApiError::bad("InvalidAnimal", e.to_string()))?;
    let animal = Animal::new(spec).map_err(|e| ApiError::bad("InvalidAnimal", e.to_string()))?;
    let bounds: BoardBounds = match &req.board {
        Some(b) => b.parse().map_err(|e: String| ApiError::bad("InvalidBoard", e))?,
        None => BoardBounds::Infinite,
    };
    let engine_spec: StrategySpec =
        req.engine.parse().map_err(|e: crate::harness::StrategyError| ApiError::bad(e.kind(), e.to_string()))?;
    engine_spec
        .expect_side(req.human_side.other())
        .map_err(|e| ApiError::bad("WrongSide", e.to_string()))?;
    let engine = build_engine(&engine_spec, &animal, bounds)?;
    let state = GameState::new(animal, bounds)
        .map_err(|e| ApiError::bad(e.reason(), e.to_string()))?
        .with_move_budget(req.move_budget);
    let seed = req.seed.unwrap_or_else(rand::random);
    let t = now();
    let mut session = Session {
        id: format!("{:016x}", rand::random::<u64>()),
        state,
        human: req.human_side,
        engine_spec,
        engine,
        rng: Rng::seed_from_u64(seed),
        seed,
        created: t,
        updated: t,
        last_engine_move: None,
        engine_error: None,
    };
    session.engine_reply();
    app.persist(&session)?;
    let body = session.public();
    app.0
        .sessions
        .write()
        .expect("session table")
        .insert(session.id.clone(), Arc::new(Mutex::new(session)));
    Ok((StatusCode::CREATED, Json(body)).into_response())
}

/// Blocks for reads; a second writer on a busy session is turned away.
fn lock_for_read(s: &Mutex<Session>) -> std::sync::MutexGuard<'_, Session> {
    s.lock().unwrap_or_else(|p| p.into_inner())
}

async fn get_game(State(app): State<AppState>, Path(id): Path<String>) -> ApiResult<Json<Value>> {
    let s = app.get(&id)?;
    let s = lock_for_read(&s);
    if cfg!(debug_assertions) {
        s.revalidate()?;
    }
    Ok(Json(s.public()))
}

async fn get_record(State(app): State<AppState>, Path(id): Path<String>) -> ApiResult<Response> {
    let s = app.get(&id)?;
    let s = lock_for_read(&s);
    Ok(([(header::CONTENT_TYPE, "text/plain; charset=utf-8")], s.record().encode()).into_response())
}

#[derive(Deserialize)]
struct PostMove {
    #[serde(rename = "move")]
    mv: String,
    #[serde(default)]
    expected_ply: Option<usize>,
}

async fn post_move(State(app): State<AppState>, Path(id): Path<String>, Json(req): Json<PostMove>) -> ApiResult<Json<Value>> {
    let s = app.get(&id)?;
    let mut s = match s.try_lock() {
        Ok(g) => g,
        Err(TryLockError::WouldBlock) => return Err(ApiError::conflict("SessionBusy", "another move is being processed")),
        Err(TryLockError::Poisoned(p)) => p.into_inner(),
    };
    if s.state.is_over() {
        return Err(ApiError::conflict("GameOver", format!("the game is over ({})", s.state.status())));
    }
    if s.state.to_move() != s.human {
        return Err(ApiError::conflict("NotYourTurn", format!("it is {}'s turn", s.state.to_move())));
    }
    if let Some(expected) = req.expected_ply {
        if expected != s.state.ply() {
            return Err(ApiError::conflict(
                "StalePly",
                format!("expected ply {expected}, the game is at ply {}", s.state.ply()),
            ));
        }
    }
    let mv: Move = req.mv.parse().map_err(|_| ApiError::bad("BadMove", format!("cannot parse move {:?}", req.mv)))?;
    let before = s.state.ply() as u32;
    s.state.apply(mv).map_err(|e| ApiError::engine(&e))?;
    s.last_engine_move = None;
    s.engine_reply();
    s.updated = now();
    app.persist(&s)?;
    let mut body = s.public();
    let delta: Vec<Value> = body["cells"]
        .as_array()
        .map(|cells| cells.iter().filter(|c| c["ply"].as_u64().is_some_and(|p| p >= u64::from(before))).cloned().collect())
        .unwrap_or_default();
    body["delta"] = Value::Array(delta);
    Ok(Json(body))
}

/// Strategies tried, in order, for a hint on the human's side.
fn hint_candidates(state: &GameState, human: Side) -> Vec<StrategySpec> {
    let bounds = state.bounds();
    let small = bounds.rect().is_some_and(|r| r.area() <= SOLVER_CELL_LIMIT);
    let mut out = Vec::new();
    match human {
        Side::Alice => {
            if bounds.is_bounded() {
                out.push(StrategySpec::AliceBoundedHelly);
            } else {
                out.push(StrategySpec::AliceFastSquare);
            }
            if small {
                out.push(StrategySpec::AliceSolver);
            }
            out.push(StrategySpec::AliceGreedy);
        }
        Side::Bob => {
            out.push(StrategySpec::BobPairing);
            if small {
                out.push(StrategySpec::BobSolver);
            }
            out.push(StrategySpec::BobAdjacentBlocker);
        }
    }
    out
}

fn replays_plan(strat: &mut dyn Strategy, state: &GameState, human: Side, rng: &mut Rng) -> ApiResult<bool> {
    let mut replay = GameState::new(state.animal().clone(), state.bounds()).map_err(|e| internal(e.to_string()))?;
    for &mv in state.history() {
        if mv.mover() == human && strat.next_move(&replay, rng).ok() != Some(mv) {
            return Ok(false);
        }
        replay.apply(mv).map_err(|e| internal(e.to_string()))?;
    }
    Ok(true)
}

async fn get_hint(State(app): State<AppState>, Path(id): Path<String>) -> ApiResult<Json<Value>> {
    let s = app.get(&id)?;
    let s = lock_for_read(&s);
    if s.state.is_over() {
        return Err(ApiError::conflict("GameOver", format!("the game is over ({})", s.state.status())));
    }
    if s.state.to_move() != s.human {
        return Err(ApiError::conflict("NotYourTurn", format!("it is {}'s turn", s.state.to_move())));
    }
    let mut rng = Rng::seed_from_u64(s.seed ^ s.state.ply() as u64);
    for spec in hint_candidates(&s.state, s.human) {
        let Ok(mut strat) = spec.build(s.state.animal(), s.state.bounds()) else {
            continue;
        };
        // The fast-square plan only applies if every human move so far is
        // the one it would have made.
        if spec == StrategySpec::AliceFastSquare && !replays_plan(&mut *strat, &s.state, s.human, &mut rng)? {
            continue;
        }
        if let Ok(mv) = strat.next_move(&s.state, &mut rng) {
            if s.state.clone().apply(mv).is_ok() {
                return Ok(Json(json!({ "session_id": s.id, "strategy": spec.to_string(), "move": mv.to_string() })));
            }
        }
    }
    Err(ApiError::new(StatusCode::NOT_FOUND, "NoHint", "no strategy can suggest a move here"))
}

pub fn router(app: AppState) -> Router {
    Router::new()
        .route("/v1/games", post(create_game))
        .route("/v1/games/{id}", get(get_game))
        .route("/v1/games/{id}/moves", post(post_move))
        .route("/v1/games/{id}/record", get(get_record))
        .route("/v1/games/{id}/hint", get(get_hint))
        .with_state(app)
}

/// Bind address from the environment, with `port` replacing its port.
pub fn bind_addr(port: Option<u16>) -> Result<SocketAddr, String> {
    let text = std::env::var(ADDR_ENV).unwrap_or_else(|_| DEFAULT_ADDR.to_owned());
    let mut addr: SocketAddr = text.parse().map_err(|e| format!("bad {ADDR_ENV} {text:?}: {e}"))?;
    if let Some(p) = port {
        addr.set_port(p);
    }
    Ok(addr)
}

pub async fn serve(addr: SocketAddr, app: AppState) -> io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    eprintln!("listening on {}", listener.local_addr()?);
    axum::serve(listener, router(app)).await
}
