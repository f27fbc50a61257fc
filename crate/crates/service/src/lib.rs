//! HTTP draft assistant.
//!
//! Holds live snake drafts in memory, records picks with optimistic
//! concurrency (every mutation names the version it expects), and ranks
//! candidate picks by the win probability of the roster they would complete.
//! Field names are documented in `api/openapi.yaml`.

pub mod error;
pub mod league;

use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex, RwLock};

use axum::extract::rejection::{JsonRejection, QueryRejection};
use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::routing::{delete, get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};

pub use error::ServiceError;
pub use league::{
    Event, EventKind, LeagueConfig, LeagueRecord, LeagueView, LiveDraft, PoolSpec, Recommendation,
    RecommendationList, MAX_WIDTH,
};

const SNAPSHOT_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
struct Snapshot {
    schema_version: u32,
    next_id: u64,
    leagues: Vec<LeagueRecord>,
}

type Shared = Arc<Mutex<LiveDraft>>;

#[derive(Default)]
struct Inner {
    leagues: RwLock<HashMap<String, Shared>>,
    next_id: AtomicU64,
    snapshot: Option<PathBuf>,
    snapshot_lock: Mutex<()>,
}

/// Shared service state; cheap to clone.
#[derive(Clone, Default)]
pub struct AppState {
    inner: Arc<Inner>,
}

fn poisoned() -> ServiceError {
    ServiceError::Internal("league lock poisoned".into())
}

impl AppState {
    pub fn new() -> Self {
        Self::default()
    }

    /// State persisted to `path` after every mutation. Existing snapshots are
    /// loaded by replaying each league's event log.
    pub fn with_snapshot(path: PathBuf) -> Result<Self, ServiceError> {
        let mut leagues = HashMap::new();
        let mut next_id = 0;
        if path.exists() {
            let text = std::fs::read_to_string(&path).map_err(|e| ServiceError::Internal(e.to_string()))?;
            let snap: Snapshot = serde_json::from_str(&text)
                .map_err(|e| ServiceError::Validation(format!("{}: {e}", path.display())))?;
            if snap.schema_version != SNAPSHOT_VERSION {
                return Err(ServiceError::Validation(format!(
                    "snapshot schema version {} (expected {SNAPSHOT_VERSION})",
                    snap.schema_version
                )));
            }
            next_id = snap.next_id;
            for record in snap.leagues {
                let live = LiveDraft::replay(record)?;
                leagues.insert(live.id().to_string(), Arc::new(Mutex::new(live)));
            }
        }
        Ok(AppState {
            inner: Arc::new(Inner {
                leagues: RwLock::new(leagues),
                next_id: AtomicU64::new(next_id),
                snapshot: Some(path),
                snapshot_lock: Mutex::new(()),
            }),
        })
    }

    fn league(&self, id: &str) -> Result<Shared, ServiceError> {
        self.inner
            .leagues
            .read()
            .map_err(|_| poisoned())?
            .get(id)
            .cloned()
            .ok_or_else(|| ServiceError::NotFound(format!("no league {id:?}")))
    }

    /// Writes every league's record; no-op without a snapshot path.
    fn persist(&self) -> Result<(), ServiceError> {
        let Some(path) = &self.inner.snapshot else {
            return Ok(());
        };
        let _guard = self.inner.snapshot_lock.lock().map_err(|_| poisoned())?;
        let shared: Vec<Shared> = self
            .inner
            .leagues
            .read()
            .map_err(|_| poisoned())?
            .values()
            .cloned()
            .collect();
        let mut leagues = shared
            .iter()
            .map(|l| l.lock().map(|l| l.record()).map_err(|_| poisoned()))
            .collect::<Result<Vec<_>, _>>()?;
        leagues.sort_by(|a, b| a.id.cmp(&b.id));
        let snap = Snapshot {
            schema_version: SNAPSHOT_VERSION,
            next_id: self.inner.next_id.load(Ordering::SeqCst),
            leagues,
        };
        let io = |e: std::io::Error| ServiceError::Internal(format!("writing snapshot: {e}"));
        let tmp = path.with_extension("tmp");
        let text = serde_json::to_vec_pretty(&snap).map_err(|e| ServiceError::Internal(e.to_string()))?;
        std::fs::write(&tmp, text).map_err(io)?;
        std::fs::rename(&tmp, path).map_err(io)
    }

    pub fn create_league(&self, config: LeagueConfig) -> Result<LeagueView, ServiceError> {
        let n = self.inner.next_id.fetch_add(1, Ordering::SeqCst) + 1;
        let live = LiveDraft::new(format!("lg-{n}"), config)?;
        let view = live.view();
        self.inner
            .leagues
            .write()
            .map_err(|_| poisoned())?
            .insert(view.id.clone(), Arc::new(Mutex::new(live)));
        self.persist()?;
        tracing::info!(league = %view.id, "created league");
        Ok(view)
    }

    pub fn get_league(&self, id: &str) -> Result<LeagueView, ServiceError> {
        Ok(self.league(id)?.lock().map_err(|_| poisoned())?.view())
    }

    pub fn record_pick(&self, id: &str, req: &PickRequest) -> Result<MutationResponse, ServiceError> {
        let shared = self.league(id)?;
        let response = {
            let mut live = shared.lock().map_err(|_| poisoned())?;
            let event = live.record_pick(req.expected_version, req.seat, &req.player_id)?;
            MutationResponse {
                version: live.version(),
                event,
                on_the_clock: live.draft().on_the_clock(),
            }
        };
        self.persist()?;
        Ok(response)
    }

    pub fn undo_last(&self, id: &str, expected_version: u64) -> Result<MutationResponse, ServiceError> {
        let shared = self.league(id)?;
        let response = {
            let mut live = shared.lock().map_err(|_| poisoned())?;
            let event = live.undo_last(expected_version)?;
            MutationResponse {
                version: live.version(),
                event,
                on_the_clock: live.draft().on_the_clock(),
            }
        };
        self.persist()?;
        Ok(response)
    }

    /// Computed on a copy of the league taken under its lock, so queries
    /// never block picks for long and never change state.
    pub fn recommendations(
        &self,
        id: &str,
        query: &RecommendationQuery,
    ) -> Result<RecommendationList, ServiceError> {
        let (ctx, draft, version, mut params) = {
            let live = self.league(id)?;
            let live = live.lock().map_err(|_| poisoned())?;
            (
                live.context().clone(),
                live.draft().clone(),
                live.version(),
                live.recommend_params().clone(),
            )
        };
        if let Some(w) = query.width {
            params.width = w;
        }
        league::recommendations(id, version, &ctx, &draft, query.seat, &params)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PickRequest {
    pub expected_version: u64,
    pub seat: usize,
    pub player_id: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MutationResponse {
    pub version: u64,
    pub event: Event,
    pub on_the_clock: Option<usize>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct UndoQuery {
    pub expected_version: u64,
}

#[derive(Debug, Clone, Default, Deserialize)]
pub struct RecommendationQuery {
    pub seat: Option<usize>,
    pub width: Option<usize>,
}

async fn blocking<T, F>(f: F) -> Result<T, ServiceError>
where
    T: Send + 'static,
    F: FnOnce() -> Result<T, ServiceError> + Send + 'static,
{
    tokio::task::spawn_blocking(f)
        .await
        .map_err(|e| ServiceError::Internal(e.to_string()))?
}

async fn create_league(
    State(state): State<AppState>,
    body: Result<Json<LeagueConfig>, JsonRejection>,
) -> Result<(StatusCode, Json<LeagueView>), ServiceError> {
    let Json(config) = body?;
    let view = blocking(move || state.create_league(config)).await?;
    Ok((StatusCode::CREATED, Json(view)))
}

async fn get_league(
    State(state): State<AppState>,
    Path(id): Path<String>,
) -> Result<Json<LeagueView>, ServiceError> {
    Ok(Json(state.get_league(&id)?))
}

async fn record_pick(
    State(state): State<AppState>,
    Path(id): Path<String>,
    body: Result<Json<PickRequest>, JsonRejection>,
) -> Result<(StatusCode, Json<MutationResponse>), ServiceError> {
    let Json(req) = body?;
    let out = blocking(move || state.record_pick(&id, &req)).await?;
    Ok((StatusCode::CREATED, Json(out)))
}

async fn undo_last(
    State(state): State<AppState>,
    Path(id): Path<String>,
    query: Result<Query<UndoQuery>, QueryRejection>,
) -> Result<Json<MutationResponse>, ServiceError> {
    let Query(q) = query?;
    Ok(Json(
        blocking(move || state.undo_last(&id, q.expected_version)).await?,
    ))
}

async fn recommendations(
    State(state): State<AppState>,
    Path(id): Path<String>,
    query: Result<Query<RecommendationQuery>, QueryRejection>,
) -> Result<Json<RecommendationList>, ServiceError> {
    let Query(q) = query?;
    Ok(Json(blocking(move || state.recommendations(&id, &q)).await?))
}

async fn health() -> &'static str {
    "ok"
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/healthz", get(health))
        .route("/leagues", post(create_league))
        .route("/leagues/{id}", get(get_league))
        .route("/leagues/{id}/picks", post(record_pick))
        .route("/leagues/{id}/picks/last", delete(undo_last))
        .route("/leagues/{id}/recommendations", get(recommendations))
        .with_state(state)
}
