//! HTTP verification service.
//!
//! | route | |
//! |-------|---|
//! | `POST /verify` | body: one gesture; response: [`Verdict`] |
//! | `GET /synth?method=handcrafted\|gan&seed=S` | one synthetic gesture |
//! | `GET /health` | version, bundle hash and feature mode |
//!
//! The bundle is loaded once and shared read-only between requests.

use std::net::SocketAddr;
use std::path::Path;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::rejection::QueryRejection;
use axum::extract::{Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};

use crate::bundle::{bundle_hash, verify_record, ModelBundle, Verdict};
use crate::error::{Error, Result};
use crate::features::FeatureMode;
use crate::gan::synth_gan_gesture;
use crate::model::GestureRecord;
use crate::synth::{synth_gesture, SynthConfig};

pub const BUNDLE_ENV: &str = "BECAPTCHA_BUNDLE";

#[derive(Debug)]
pub struct AppState {
    pub bundle: ModelBundle,
    pub bundle_sha256: String,
}

impl AppState {
    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        Ok(AppState {
            bundle: ModelBundle::from_bytes(bytes)?,
            bundle_sha256: bundle_hash(bytes),
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
        Self::from_bytes(&bytes)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Health {
    pub status: String,
    pub version: String,
    pub bundle_sha256: String,
    pub feature_mode: FeatureMode,
    pub gan_available: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub error: String,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub line: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub column: Option<usize>,
}

struct ApiError {
    status: StatusCode,
    body: ErrorBody,
}

impl ApiError {
    fn new(status: StatusCode, error: &str, message: impl Into<String>) -> Self {
        ApiError {
            status,
            body: ErrorBody {
                error: error.into(),
                message: message.into(),
                line: None,
                column: None,
            },
        }
    }
}

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        match e {
            Error::ModelMissing(_) => ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, "model_missing", e.to_string()),
            Error::PriorRejectionExceeded { .. } | Error::Io { .. } | Error::Stream(_) => {
                ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "internal", e.to_string())
            }
            _ => ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, "invalid_gesture", e.to_string()),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(self.body)).into_response()
    }
}

async fn health(State(state): State<Arc<AppState>>) -> Json<Health> {
    Json(Health {
        status: "ok".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        bundle_sha256: state.bundle_sha256.clone(),
        feature_mode: state.bundle.feature_mode,
        gan_available: state.bundle.gans.is_some(),
    })
}

async fn verify_handler(State(state): State<Arc<AppState>>, body: Bytes) -> Result<Json<Verdict>, ApiError> {
    let record: GestureRecord = serde_json::from_slice(&body).map_err(|e| ApiError {
        status: StatusCode::BAD_REQUEST,
        body: ErrorBody {
            error: "parse".into(),
            message: e.to_string(),
            line: Some(e.line()),
            column: Some(e.column()),
        },
    })?;
    Ok(Json(verify_record(&state.bundle, record)?))
}

#[derive(Debug, Deserialize)]
struct SynthQuery {
    method: String,
    seed: u64,
}

async fn synth_handler(
    State(state): State<Arc<AppState>>,
    query: Result<Query<SynthQuery>, QueryRejection>,
) -> Result<Json<GestureRecord>, ApiError> {
    let Query(q) = query.map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, "query", e.body_text()))?;
    let bundle = &state.bundle;
    let gesture = match q.method.as_str() {
        "handcrafted" => synth_gesture(&bundle.priors, q.seed, &SynthConfig::default())?,
        "gan" => {
            let pair = bundle
                .gans
                .as_ref()
                .ok_or_else(|| ApiError::new(StatusCode::NOT_FOUND, "model_missing", "bundle has no GAN generators"))?;
            synth_gan_gesture(pair, &bundle.priors, q.seed)?
        }
        other => {
            return Err(ApiError::new(
                StatusCode::BAD_REQUEST,
                "query",
                format!("unknown method `{other}`; expected handcrafted or gan"),
            ))
        }
    };
    Ok(Json(gesture.into()))
}

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/verify", post(verify_handler))
        .route("/synth", get(synth_handler))
        .route("/health", get(health))
        .with_state(state)
}

/// Serves until the process ends.
pub async fn serve_on(listener: tokio::net::TcpListener, state: Arc<AppState>) -> Result<()> {
    axum::serve(listener, router(state)).await?;
    Ok(())
}

/// Loads the bundle, binds `addr` and serves on a multi-threaded runtime.
pub fn serve(bundle_path: impl AsRef<Path>, addr: SocketAddr) -> Result<()> {
    let state = Arc::new(AppState::load(bundle_path)?);
    let runtime = tokio::runtime::Runtime::new()?;
    runtime.block_on(async {
        let listener = tokio::net::TcpListener::bind(addr).await.map_err(|source| Error::Bind {
            addr: addr.to_string(),
            source,
        })?;
        eprintln!("listening on {}", listener.local_addr()?);
        serve_on(listener, state).await
    })
}
