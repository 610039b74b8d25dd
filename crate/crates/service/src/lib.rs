//! HTTP backend for the domination game: hands out random polyominoes,
//! checks submitted placements and reveals the minimum number of pieces.
//!
//! Sessions live in memory and expire after a TTL. Each session solves its
//! board at most once, on a blocking worker, so a slow board never holds up
//! requests for other sessions.

use std::collections::{BTreeSet, HashMap};
use std::net::SocketAddr;
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use axum::extract::rejection::JsonRejection;
use axum::extract::{Path, State};
use axum::http::{HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use polydom_core::{random_polyomino, solve_problem, verify, Board, Budget, Cell, Piece, Problem, Status, VerifyReport};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use tokio::sync::OnceCell;
use tower_http::cors::{AllowOrigin, Any, CorsLayer};

pub const DEFAULT_PORT: u16 = 8080;
pub const DEFAULT_TILES: usize = 50;

#[derive(Debug, Clone)]
pub struct ServiceConfig {
    pub ttl: Duration,
    /// Per-session budget for the optimal-value solve.
    pub budget: Budget,
    pub max_tiles: usize,
    pub percolation: f64,
    /// Origin allowed by CORS; any origin when unset.
    pub allow_origin: Option<String>,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        ServiceConfig {
            ttl: Duration::from_secs(3600),
            budget: Budget::with_time(Duration::from_secs(60)),
            max_tiles: 400,
            percolation: 0.5,
            allow_origin: None,
        }
    }
}

/// Result of a session's solve. `optimal` is `None` when the budget ran out,
/// in which case `status` is `"bound"` and `bound` holds the best proven
/// lower bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Optimal {
    pub optimal: Option<usize>,
    pub status: &'static str,
    pub bound: Option<usize>,
}

pub type SolveFn = Arc<dyn Fn(&Board, Piece, &Budget) -> Optimal + Send + Sync>;

/// Minimum attacking domination, the value the game scores against.
pub fn min_domination(board: &Board, piece: Piece, budget: &Budget) -> Optimal {
    let sol = solve_problem(&Problem::min_domination(board.clone(), piece), budget);
    match sol.status {
        Status::Optimal => Optimal {
            optimal: sol.value,
            status: "optimal",
            bound: sol.value,
        },
        Status::BudgetExceeded => Optimal {
            optimal: None,
            status: "bound",
            bound: sol.bound,
        },
        Status::Infeasible => Optimal {
            optimal: None,
            status: "infeasible",
            bound: None,
        },
    }
}

struct GameSession {
    board: Board,
    piece: Piece,
    created: Instant,
    optimal: OnceCell<Optimal>,
}

struct Inner {
    sessions: Mutex<HashMap<String, Arc<GameSession>>>,
    config: ServiceConfig,
    solver: SolveFn,
}

#[derive(Clone)]
pub struct AppState {
    inner: Arc<Inner>,
}

impl AppState {
    pub fn new(config: ServiceConfig) -> AppState {
        AppState::with_solver(config, Arc::new(min_domination))
    }

    /// State whose sessions compute their optimum with `solver`.
    pub fn with_solver(config: ServiceConfig, solver: SolveFn) -> AppState {
        AppState {
            inner: Arc::new(Inner {
                sessions: Mutex::new(HashMap::new()),
                config,
                solver,
            }),
        }
    }

    pub fn config(&self) -> &ServiceConfig {
        &self.inner.config
    }

    pub fn session_count(&self) -> usize {
        self.inner.sessions.lock().unwrap().len()
    }

    /// Drops sessions older than the TTL and returns how many went.
    pub fn evict_expired(&self) -> usize {
        let ttl = self.inner.config.ttl;
        let mut map = self.inner.sessions.lock().unwrap();
        let before = map.len();
        map.retain(|_, s| s.created.elapsed() < ttl);
        before - map.len()
    }

    fn insert(&self, board: Board, piece: Piece) -> String {
        let id = format!("{:032x}", rand::random::<u128>());
        let session = Arc::new(GameSession {
            board,
            piece,
            created: Instant::now(),
            optimal: OnceCell::new(),
        });
        self.inner.sessions.lock().unwrap().insert(id.clone(), session);
        id
    }

    fn get(&self, id: &str) -> Result<Arc<GameSession>, ApiError> {
        let mut map = self.inner.sessions.lock().unwrap();
        match map.get(id) {
            Some(s) if s.created.elapsed() < self.inner.config.ttl => Ok(s.clone()),
            Some(_) => {
                map.remove(id);
                Err(ApiError::not_found(id))
            }
            None => Err(ApiError::not_found(id)),
        }
    }

    /// The session's cached optimum. The first caller runs the solve; any
    /// concurrent caller on the same session waits for that result.
    async fn optimal(&self, s: &Arc<GameSession>) -> Optimal {
        s.optimal
            .get_or_init(|| {
                let solver = self.inner.solver.clone();
                let budget = self.inner.config.budget;
                let s = s.clone();
                async move {
                    tokio::task::spawn_blocking(move || solver(&s.board, s.piece, &budget))
                        .await
                        .expect("solver task panicked")
                }
            })
            .await
            .clone()
    }
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    message: String,
}

impl ApiError {
    fn new(status: StatusCode, message: impl Into<String>) -> ApiError {
        ApiError {
            status,
            message: message.into(),
        }
    }

    fn not_found(id: &str) -> ApiError {
        ApiError::new(StatusCode::NOT_FOUND, format!("no session {id}"))
    }
}

impl From<JsonRejection> for ApiError {
    fn from(e: JsonRejection) -> ApiError {
        ApiError::new(StatusCode::BAD_REQUEST, e.body_text())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(json!({ "error": self.message }))).into_response()
    }
}

#[derive(Debug, Deserialize)]
struct CreateRequest {
    tiles: Option<usize>,
    piece: String,
    seed: Option<u64>,
}

#[derive(Debug, Serialize)]
struct CreateResponse {
    id: String,
    piece: Piece,
    board: Value,
}

#[derive(Debug, Deserialize)]
struct SubmitRequest {
    cells: Vec<Vec<i32>>,
}

#[derive(Debug, Serialize)]
struct SubmitResponse {
    #[serde(flatten)]
    report: VerifyReport,
    count: usize,
    optimal: Option<usize>,
    delta: Option<i64>,
    status: &'static str,
    bound: Option<usize>,
}

async fn create_session(
    State(state): State<AppState>,
    body: Result<Json<CreateRequest>, JsonRejection>,
) -> Result<Json<CreateResponse>, ApiError> {
    let Json(req) = body?;
    let piece: Piece = req
        .piece
        .parse()
        .map_err(|_| ApiError::new(StatusCode::BAD_REQUEST, format!("unsupported piece {:?}", req.piece)))?;
    let tiles = req.tiles.unwrap_or(DEFAULT_TILES);
    let max = state.config().max_tiles;
    if tiles == 0 || tiles > max {
        return Err(ApiError::new(
            StatusCode::BAD_REQUEST,
            format!("tiles must be between 1 and {max}, got {tiles}"),
        ));
    }
    let seed = req.seed.unwrap_or_else(rand::random);
    let board = random_polyomino(tiles, seed, state.config().percolation);
    let json: Value = serde_json::from_str(&board.to_json()).expect("board json is valid");
    let id = state.insert(board, piece);
    Ok(Json(CreateResponse { id, piece, board: json }))
}

async fn submit(
    State(state): State<AppState>,
    Path(id): Path<String>,
    body: Result<Json<SubmitRequest>, JsonRejection>,
) -> Result<Json<SubmitResponse>, ApiError> {
    let session = state.get(&id)?;
    let Json(req) = body?;
    let cells: BTreeSet<Cell> = req.cells.into_iter().map(Cell::new).collect();
    let off: Vec<&Cell> = cells.iter().filter(|c| !session.board.contains(c)).collect();
    if !off.is_empty() {
        return Err(ApiError::new(
            StatusCode::UNPROCESSABLE_ENTITY,
            format!("cells off the board: {}", serde_json::to_string(&off).unwrap()),
        ));
    }
    let report = verify(&session.board, session.piece, &cells)
        .map_err(|e| ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, e.to_string()))?;
    let opt = state.optimal(&session).await;
    let count = cells.len();
    let delta = match (report.dominates, opt.optimal) {
        (true, Some(o)) => Some(count as i64 - o as i64),
        _ => None,
    };
    Ok(Json(SubmitResponse {
        report,
        count,
        optimal: opt.optimal,
        delta,
        status: opt.status,
        bound: opt.bound,
    }))
}

async fn hint(State(state): State<AppState>, Path(id): Path<String>) -> Result<Json<Optimal>, ApiError> {
    let session = state.get(&id)?;
    Ok(Json(state.optimal(&session).await))
}

pub fn router(state: AppState) -> Router {
    let origin = match &state.config().allow_origin {
        Some(o) => match HeaderValue::from_str(o) {
            Ok(v) => AllowOrigin::exact(v),
            Err(_) => AllowOrigin::any(),
        },
        None => AllowOrigin::any(),
    };
    let cors = CorsLayer::new().allow_origin(origin).allow_methods(Any).allow_headers(Any);
    Router::new()
        .route("/session", post(create_session))
        .route("/session/{id}/submit", post(submit))
        .route("/session/{id}/hint", get(hint))
        .layer(cors)
        .with_state(state)
}

/// Binds `addr` and serves until the process is stopped, sweeping expired
/// sessions in the background.
pub async fn serve(addr: SocketAddr, config: ServiceConfig) -> std::io::Result<()> {
    let state = AppState::new(config);
    let sweeper = state.clone();
    let every = (state.config().ttl / 4).max(Duration::from_secs(1));
    tokio::spawn(async move {
        let mut tick = tokio::time::interval(every);
        loop {
            tick.tick().await;
            sweeper.evict_expired();
        }
    });
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, router(state)).await
}
