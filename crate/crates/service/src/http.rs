//! JSON API over [`AuthService`].
//!
//! | method | path | body | reply |
//! |---|---|---|---|
//! | GET | `/config` | | published configuration |
//! | POST | `/register` | `{user, secret, renderings}` | enrollment summary |
//! | POST | `/session` | `{user}` | `{session, challenge: {a, w}}` |
//! | POST | `/session/{id}/response` | `{trace}` | `{round, done, verdict?, challenge?}` |
//! | GET | `/transcript?user=&sessions=accepted\|all` | | transcript |
//!
//! A trace payload is either the rendering file as one string (JSON lines)
//! or an object `{header, events}`. Errors are `{"error": message}`.

use std::sync::Arc;

use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use hybridauth_core::biometric::{Trace, TraceError};
use hybridauth_core::{Challenge, Transcript};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::{AuthService, EnrollmentSummary, PublishedConfig, ServiceError, Verdict};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TracePayload {
    File(String),
    Parsed(Trace),
}

impl TracePayload {
    pub fn into_trace(self) -> Result<Trace, TraceError> {
        match self {
            TracePayload::File(text) => Trace::parse_jsonl(&text),
            TracePayload::Parsed(trace) => trace.validate().map(|_| trace),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RegisterRequest {
    pub user: String,
    pub secret: Vec<usize>,
    pub renderings: Vec<TracePayload>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SessionRequest {
    pub user: String,
}

/// `trace` is kept as raw JSON so that a malformed rendering still reaches
/// the session and fails its round instead of the request.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResponseRequest {
    pub trace: serde_json::Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionReply {
    pub session: String,
    pub challenge: Challenge,
}

/// Client view of a round. Per-round outcomes stay in the audit log.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResponseReply {
    pub round: u32,
    pub done: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub challenge: Option<Challenge>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SessionFilter {
    #[default]
    Accepted,
    All,
}

#[derive(Debug, Clone, Deserialize)]
pub struct TranscriptQuery {
    pub user: String,
    #[serde(default)]
    pub sessions: SessionFilter,
}

pub struct ApiError(ServiceError);

impl From<ServiceError> for ApiError {
    fn from(e: ServiceError) -> Self {
        Self(e)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let status = match &self.0 {
            ServiceError::Config(_)
            | ServiceError::Registration(_)
            | ServiceError::Params(_)
            | ServiceError::Template(_)
            | ServiceError::Trace(_) => StatusCode::BAD_REQUEST,
            ServiceError::Unavailable => StatusCode::FORBIDDEN,
            ServiceError::UnknownSession => StatusCode::NOT_FOUND,
            ServiceError::NoPendingChallenge => StatusCode::CONFLICT,
            ServiceError::Store(_) => StatusCode::INTERNAL_SERVER_ERROR,
        };
        (status, Json(json!({ "error": self.0.to_string() }))).into_response()
    }
}

type ApiResult<T> = Result<Json<T>, ApiError>;

async fn blocking<T: Send + 'static>(f: impl FnOnce() -> Result<T, ServiceError> + Send + 'static) -> ApiResult<T> {
    tokio::task::spawn_blocking(f)
        .await
        .map_err(|e| ServiceError::Store(format!("worker failed: {e}")))?
        .map(Json)
        .map_err(ApiError)
}

async fn get_config(State(svc): State<Arc<AuthService>>) -> Json<PublishedConfig> {
    Json(svc.config().published.clone())
}

async fn register(State(svc): State<Arc<AuthService>>, Json(req): Json<RegisterRequest>) -> ApiResult<EnrollmentSummary> {
    let renderings = req
        .renderings
        .into_iter()
        .enumerate()
        .map(|(i, p)| p.into_trace().map_err(|e| ServiceError::Registration(format!("rendering {i}: {e}"))))
        .collect::<Result<Vec<_>, _>>()?;
    blocking(move || svc.register(&req.user, &req.secret, renderings)).await
}

async fn start_session(State(svc): State<Arc<AuthService>>, Json(req): Json<SessionRequest>) -> ApiResult<SessionReply> {
    let start = svc.start_session(&req.user)?;
    Ok(Json(SessionReply { session: start.session, challenge: start.challenge }))
}

async fn submit(
    State(svc): State<Arc<AuthService>>,
    Path(id): Path<String>,
    Json(req): Json<ResponseRequest>,
) -> ApiResult<ResponseReply> {
    let trace = serde_json::from_value::<TracePayload>(req.trace).ok().and_then(|p| p.into_trace().ok());
    let Json(reply) = blocking(move || svc.submit_response(&id, trace)).await?;
    Ok(Json(ResponseReply { round: reply.round, done: reply.done, verdict: reply.verdict, challenge: reply.challenge }))
}

async fn transcript(State(svc): State<Arc<AuthService>>, Query(q): Query<TranscriptQuery>) -> ApiResult<Transcript> {
    blocking(move || Ok(svc.export_transcript(&q.user, q.sessions == SessionFilter::Accepted))).await
}

pub fn router(service: Arc<AuthService>) -> Router {
    Router::new()
        .route("/config", get(get_config))
        .route("/register", post(register))
        .route("/session", post(start_session))
        .route("/session/{id}/response", post(submit))
        .route("/transcript", get(transcript))
        .with_state(service)
}

/// Serves until the listener fails.
pub async fn serve(service: Arc<AuthService>, addr: std::net::SocketAddr) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, router(service)).await
}
