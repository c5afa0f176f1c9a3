use std::collections::HashMap;
use std::sync::{Arc, Mutex, MutexGuard};
use std::time::{Duration, SystemTime, UNIX_EPOCH};

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use secav_core::hilbert::AxiomSet;
use secav_core::prover::SearchBudget;
use secav_session::System;
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Value};
use tokio::sync::Semaphore;

use crate::error::{envelope, ApiError};
use crate::log::Durable;
use crate::ops::{self, BudgetRequest};
use crate::store::{session_view, Command};

/// Shared state behind the router.
#[derive(Clone)]
pub struct AppState {
    inner: Arc<Inner>,
}

struct Inner {
    store: Mutex<Durable>,
    workers: Arc<Semaphore>,
    prover_deadline: Duration,
}

impl AppState {
    pub fn new(store: Durable, workers: usize, prover_deadline: Duration) -> AppState {
        AppState {
            inner: Arc::new(Inner { store: Mutex::new(store), workers: Arc::new(Semaphore::new(workers.max(1))), prover_deadline }),
        }
    }

    fn store(&self) -> Result<MutexGuard<'_, Durable>, ApiError> {
        self.inner.store.lock().map_err(|_| ApiError::internal("store lock poisoned"))
    }

    fn execute(&self, cmd: &Command) -> Result<Value, ApiError> {
        self.store()?.execute(cmd)
    }

    /// Writes a snapshot; used at shutdown.
    pub fn snapshot(&self) -> std::io::Result<()> {
        self.inner.store.lock().map_err(|_| std::io::Error::other("store lock poisoned"))?.snapshot()
    }

    /// Runs CPU-bound work on the bounded worker pool.
    async fn offload<T: Send + 'static>(&self, job: impl FnOnce() -> T + Send + 'static) -> Result<T, ApiError> {
        let permit = self.inner.workers.clone().acquire_owned().await.map_err(|_| ApiError::internal("worker pool closed"))?;
        tokio::task::spawn_blocking(move || {
            let out = job();
            drop(permit);
            out
        })
        .await
        .map_err(|e| ApiError::internal(format!("worker failed: {e}")))
    }
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/spec", get(spec))
        .route("/sessions", get(list_sessions).post(create_session))
        .route("/sessions/{id}", get(get_session))
        .route("/sessions/{id}/applicable", get(applicable))
        .route("/sessions/{id}/apply", post(apply))
        .route("/sessions/{id}/goto", post(goto))
        .route("/sessions/{id}/undo", post(undo))
        .route("/sessions/{id}/redo", post(redo))
        .route("/sessions/{id}/export", get(export))
        .route("/sessions/{id}/warnings", get(warnings))
        .route("/check", post(check))
        .route("/prove", post(prove))
        .route("/countermodel", post(countermodel))
        .route("/assignments", post(add_assignment))
        .route("/assignments/{id}/submit", post(submit))
        .route("/assignments/{id}/progress", get(progress))
        .fallback(|| async { reply(Err(ApiError::new(404, "NotFound", "no such endpoint"))) })
        .with_state(state)
}

fn reply(result: Result<Value, ApiError>) -> Response {
    let status = match &result {
        Ok(_) => StatusCode::OK,
        Err(e) => StatusCode::from_u16(e.status).unwrap_or(StatusCode::INTERNAL_SERVER_ERROR),
    };
    (status, Json(envelope(&result))).into_response()
}

fn body<T: DeserializeOwned>(bytes: &Bytes) -> Result<T, ApiError> {
    serde_json::from_slice(bytes).map_err(|e| ApiError::bad_request(format!("invalid request body: {e}")))
}

async fn spec() -> Response {
    Json(crate::openapi::document()).into_response()
}

async fn list_sessions(State(st): State<AppState>) -> Response {
    reply(st.store().map(|d| {
        let store = d.store();
        let list: Vec<Value> = store
            .session_ids()
            .map(|id| {
                let s = store.session(id).expect("listed sessions exist");
                json!({ "id": id, "system": s.system(), "revision": s.revision(), "closed": s.is_closed() })
            })
            .collect();
        json!(list)
    }))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CreateRequest {
    system: System,
    goal: String,
    #[serde(default)]
    assumptions: Vec<String>,
}

async fn create_session(State(st): State<AppState>, raw: Bytes) -> Response {
    reply(body::<CreateRequest>(&raw).and_then(|r| {
        st.execute(&Command::CreateSession { system: r.system, goal: r.goal, assumptions: r.assumptions })
    }))
}

async fn get_session(State(st): State<AppState>, Path(id): Path<String>) -> Response {
    reply(st.store().and_then(|d| d.store().session(&id).map(|s| session_view(&id, s))))
}

async fn applicable(State(st): State<AppState>, Path(id): Path<String>, Query(q): Query<HashMap<String, String>>) -> Response {
    let run = || {
        let goal = match q.get("goal") {
            None => 0,
            Some(g) => g.parse::<usize>().map_err(|_| ApiError::bad_request(format!("goal must be an index, got `{g}`")))?,
        };
        let d = st.store()?;
        let offers = d.store().session(&id)?.list_applicable(goal)?;
        Ok(json!({ "goal": goal, "rules": offers }))
    };
    reply(run())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ApplyRequest {
    revision: u64,
    goal: usize,
    rule: String,
}

async fn apply(State(st): State<AppState>, Path(id): Path<String>, raw: Bytes) -> Response {
    reply(body::<ApplyRequest>(&raw).and_then(|r| {
        st.execute(&Command::Apply { session: id, revision: r.revision, goal: r.goal, rule: r.rule })
    }))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GotoRequest {
    revision: u64,
    index: usize,
}

async fn goto(State(st): State<AppState>, Path(id): Path<String>, raw: Bytes) -> Response {
    reply(body::<GotoRequest>(&raw).and_then(|r| st.execute(&Command::Goto { session: id, revision: r.revision, index: r.index })))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RevisionRequest {
    revision: u64,
}

async fn undo(State(st): State<AppState>, Path(id): Path<String>, raw: Bytes) -> Response {
    reply(body::<RevisionRequest>(&raw).and_then(|r| st.execute(&Command::Undo { session: id, revision: r.revision })))
}

async fn redo(State(st): State<AppState>, Path(id): Path<String>, raw: Bytes) -> Response {
    reply(body::<RevisionRequest>(&raw).and_then(|r| st.execute(&Command::Redo { session: id, revision: r.revision })))
}

async fn export(State(st): State<AppState>, Path(id): Path<String>) -> Response {
    reply(st.store().and_then(|d| {
        let s = d.store().session(&id)?;
        Ok(json!({ "script": s.export_script(), "session": s.save() }))
    }))
}

/// Background assessments of the open goals. Results are computed on
/// demand and never stored.
async fn warnings(State(st): State<AppState>, Path(id): Path<String>) -> Response {
    let session = match st.store().and_then(|d| d.store().session(&id).cloned()) {
        Ok(s) => s,
        Err(e) => return reply(Err(e)),
    };
    let revision = session.revision();
    let budget = SearchBudget::interactive();
    let result = st
        .offload(move || {
            let mut s = session;
            s.assess_pending(&budget);
            let goals = s.open_goals();
            let list: Vec<Value> = s
                .warnings()
                .into_iter()
                .zip(goals)
                .map(|(w, goal)| match w {
                    Some(w) => json!({ "goal": goal, "status": w.status, "alarming": w.is_alarming(), "model": w.model }),
                    None => json!({ "goal": goal, "status": "Pending", "alarming": false }),
                })
                .collect();
            json!({ "revision": revision, "warnings": list })
        })
        .await;
    reply(result)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CheckRequest {
    script: String,
    format: Option<String>,
    /// Name of a bundled axiom set: `system-w` (default) or `fallback`.
    axioms: Option<String>,
    /// Axiom schemas given inline; overrides `axioms`.
    axiom_text: Option<String>,
}

fn axiom_set(name: Option<&str>, text: Option<&str>) -> Result<AxiomSet, ApiError> {
    if let Some(t) = text {
        return AxiomSet::parse(t).map_err(|e| ApiError::new(400, "AxiomError", e.to_string()));
    }
    match name.unwrap_or("system-w") {
        "system-w" => Ok(AxiomSet::system_w()),
        "fallback" => Ok(AxiomSet::fallback()),
        other => Err(ApiError::bad_request(format!("unknown axiom set `{other}`"))),
    }
}

async fn check(raw: Bytes) -> Response {
    let run = || {
        let r: CheckRequest = body(&raw)?;
        let kind = match r.format.as_deref() {
            None => None,
            Some(f) => Some(ops::parse_kind(f).ok_or_else(|| ApiError::bad_request(format!("unknown format `{f}`")))?),
        };
        let axioms = axiom_set(r.axioms.as_deref(), r.axiom_text.as_deref())?;
        Ok(ops::check_script(&r.script, kind, &axioms)?.report)
    };
    reply(run())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ProveRequest {
    #[serde(default)]
    sequent: Vec<String>,
    formula: Option<String>,
    #[serde(default)]
    budget: BudgetRequest,
}

fn formulas(sequent: Vec<String>, formula: Option<String>) -> Result<Vec<secav_core::syntax::Formula>, ApiError> {
    match (formula, sequent.is_empty()) {
        (Some(f), true) => ops::parse_sequent(&[f]),
        (None, _) => ops::parse_sequent(&sequent),
        (Some(_), false) => Err(ApiError::bad_request("give either `formula` or `sequent`, not both")),
    }
}

async fn prove(State(st): State<AppState>, raw: Bytes) -> Response {
    let prepared = body::<ProveRequest>(&raw).and_then(|r| Ok((formulas(r.sequent, r.formula)?, r.budget)));
    let (sequent, budget) = match prepared {
        Ok(p) => p,
        Err(e) => return reply(Err(e)),
    };
    let budget = budget.resolve(st.inner.prover_deadline);
    reply(st.offload(move || ops::prove_sequent(&sequent, &budget)).await.and_then(|r| r))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CountermodelRequest {
    #[serde(default)]
    sequent: Vec<String>,
    formula: Option<String>,
    max_size: Option<usize>,
    /// Evaluations allowed.
    budget: Option<u64>,
}

async fn countermodel(State(st): State<AppState>, raw: Bytes) -> Response {
    let prepared = body::<CountermodelRequest>(&raw).and_then(|r| {
        let max_size = r.max_size.unwrap_or(3);
        if !(1..=8).contains(&max_size) {
            return Err(ApiError::bad_request("max_size must be between 1 and 8"));
        }
        Ok((formulas(r.sequent, r.formula)?, max_size, r.budget.unwrap_or(5_000_000).min(100_000_000)))
    });
    let (sequent, max_size, budget) = match prepared {
        Ok(p) => p,
        Err(e) => return reply(Err(e)),
    };
    reply(st.offload(move || ops::find_countermodel(&sequent, max_size, budget)).await)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AssignmentRequest {
    id: String,
    system: System,
    goal: String,
    due: Option<String>,
}

async fn add_assignment(State(st): State<AppState>, raw: Bytes) -> Response {
    reply(body::<AssignmentRequest>(&raw).and_then(|r| {
        if r.id.is_empty() || r.id.contains('/') {
            return Err(ApiError::bad_request("assignment ids must be non-empty and contain no `/`"));
        }
        st.execute(&Command::AddAssignment { id: r.id, system: r.system, goal: r.goal, due: r.due })
    }))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SubmitRequest {
    student: String,
    session: String,
    /// Seconds since the epoch; the server clock when absent.
    timestamp: Option<u64>,
}

async fn submit(State(st): State<AppState>, Path(id): Path<String>, raw: Bytes) -> Response {
    reply(body::<SubmitRequest>(&raw).and_then(|r| {
        let timestamp = r
            .timestamp
            .unwrap_or_else(|| SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()));
        st.execute(&Command::Submit { assignment: id, student: r.student, session: r.session, timestamp })
    }))
}

async fn progress(State(st): State<AppState>, Path(id): Path<String>) -> Response {
    reply(st.store().and_then(|d| {
        let rows = d.store().judge().progress(&id)?;
        Ok(json!({ "assignment": id, "students": rows }))
    }))
}
