//! HTTP JSON interface under `/v1`.
//!
//! | method | path             | body                                                  |
//! |--------|------------------|-------------------------------------------------------|
//! | GET    | /v1/health       |                                                       |
//! | GET    | /v1/idioms       | optional `?kind=preset` or `?kind=trained`            |
//! | POST   | /v1/idioms/corpus| `{name, tonic, sequences}`                            |
//! | POST   | /v1/blend        | `{idiom1, idiom2, answers, capacity?, bridge_mass?}`  |
//! | POST   | /v1/sample       | `{source, start, length, seed}`                       |
//!
//! Errors are `{"error": {"code", "message", "path"?}}`.

use std::collections::HashMap;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::Router;
use chordblend_core::{Chord, Idiom, TransitionMatrix};
use serde::Serialize;
use serde_json::value::RawValue;
use serde_json::{json, Value};

use crate::error::AppError;
use crate::export::extended_from_value;
use crate::formats::{answers_from_value, answers_to_value, corpus_from_value, matrix_from_value, parse_chord};
use crate::pipeline::{run_blend, sample_chords, session_id, walk_to_json, BlendSettings};
use crate::registry::{IdiomKind, Registry};
use crate::schema::{self, child};

#[derive(Clone, Default)]
pub struct AppState {
    pub registry: Arc<Registry>,
}

pub fn router(state: AppState) -> Router {
    let v1 = Router::new()
        .route("/health", get(health))
        .route("/idioms", get(list_idioms))
        .route("/idioms/corpus", post(upload_corpus))
        .route("/blend", post(blend))
        .route("/sample", post(sample));
    Router::new().nest("/v1", v1).with_state(state)
}

impl AppError {
    pub fn status(&self) -> StatusCode {
        match self {
            AppError::UnknownIdiom(_) => StatusCode::NOT_FOUND,
            AppError::Conflict(_) => StatusCode::CONFLICT,
            AppError::Read { .. } | AppError::Write { .. } | AppError::Internal(_) => {
                StatusCode::INTERNAL_SERVER_ERROR
            }
            _ => StatusCode::BAD_REQUEST,
        }
    }
}

impl IntoResponse for AppError {
    fn into_response(self) -> Response {
        let mut error = json!({ "code": self.code(), "message": self.to_string() });
        if let AppError::Schema { path, .. } = &self {
            error["path"] = Value::String(path.clone());
        }
        json_response(self.status(), json!({ "error": error }).to_string())
    }
}

fn json_response(status: StatusCode, body: String) -> Response {
    (status, [(header::CONTENT_TYPE, "application/json")], body).into_response()
}

fn to_body<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("response documents always serialize")
}

async fn blocking<T: Send + 'static>(
    f: impl FnOnce() -> Result<T, AppError> + Send + 'static,
) -> Result<T, AppError> {
    tokio::task::spawn_blocking(f)
        .await
        .map_err(|e| AppError::Internal(e.to_string()))?
}

async fn health() -> Response {
    json_response(StatusCode::OK, json!({ "status": "ok" }).to_string())
}

async fn list_idioms(
    State(state): State<AppState>,
    Query(params): Query<HashMap<String, String>>,
) -> Result<Response, AppError> {
    if let Some(key) = params.keys().find(|k| k.as_str() != "kind") {
        return Err(AppError::Usage(format!("unknown query parameter {key:?}")));
    }
    let kind = match params.get("kind").map(String::as_str) {
        None | Some("") => None,
        Some(s) => Some(IdiomKind::parse(s).ok_or_else(|| {
            AppError::Usage(format!("kind must be \"preset\" or \"trained\", not {s:?}"))
        })?),
    };
    let idioms = state.registry.catalog(kind);
    Ok(json_response(StatusCode::OK, to_body(&json!({ "idioms": idioms }))))
}

async fn upload_corpus(State(state): State<AppState>, body: Bytes) -> Result<Response, AppError> {
    let value = parse_body(&body)?;
    let corpus = corpus_from_value(&value)?;
    let name = corpus
        .name
        .clone()
        .ok_or_else(|| AppError::schema("/name", "missing field"))?;
    let idiom = blocking(move || corpus.train(&name)).await?;
    let idiom = state.registry.insert(idiom, IdiomKind::Trained)?;
    let body = json!({
        "name": idiom.name(),
        "tonic": idiom.tonic().value(),
        "chord_count": idiom.chords().len(),
        "kind": IdiomKind::Trained,
    });
    Ok(json_response(StatusCode::CREATED, to_body(&body)))
}

fn parse_body(body: &[u8]) -> Result<Value, AppError> {
    let text = std::str::from_utf8(body).map_err(|_| AppError::schema("", "request body is not UTF-8"))?;
    schema::parse(text)
}

struct BlendRequest {
    idiom1: Arc<Idiom>,
    idiom2: Arc<Idiom>,
    settings: BlendSettings,
}

fn blend_request(registry: &Registry, value: &Value, path: &str) -> Result<BlendRequest, AppError> {
    let map = schema::object(value, path)?;
    schema::only_keys(map, path, &["idiom1", "idiom2", "answers", "capacity", "bridge_mass"])?;
    let idiom1 = schema::string(schema::field(map, path, "idiom1")?, &child(path, "idiom1"))?;
    let idiom2 = schema::string(schema::field(map, path, "idiom2")?, &child(path, "idiom2"))?;
    let arguments = answers_from_value(schema::field(map, path, "answers")?, &child(path, "answers"))?;
    let mut settings = BlendSettings::new(arguments);
    if let Some(v) = map.get("capacity") {
        let capacity = schema::unsigned(v, &child(path, "capacity"))?;
        settings.capacity = usize::try_from(capacity)
            .map_err(|_| AppError::schema(child(path, "capacity"), "capacity is too large"))?;
    }
    if let Some(v) = map.get("bridge_mass") {
        settings.bridge_mass = schema::number(v, &child(path, "bridge_mass"))?;
    }
    Ok(BlendRequest {
        idiom1: registry.get(idiom1)?,
        idiom2: registry.get(idiom2)?,
        settings,
    })
}

#[derive(Serialize)]
struct SessionDoc<'a> {
    id: String,
    idiom1: &'a str,
    idiom2: &'a str,
    answers: Value,
    capacity: usize,
    bridge_mass: f64,
}

#[derive(Serialize)]
struct BlendResponse<'a> {
    session: SessionDoc<'a>,
    pool: &'a RawValue,
    extended: &'a RawValue,
}

/// Runs a blend and renders the response body. The embedded `pool` and
/// `extended` documents are the exact bytes the command line writes.
pub fn blend_response_body(idiom1: &Idiom, idiom2: &Idiom, settings: BlendSettings) -> Result<String, AppError> {
    let docs = run_blend(idiom1, idiom2, settings)?.documents();
    let raw = |s: &str| RawValue::from_string(s.to_string()).map_err(|e| AppError::Internal(e.to_string()));
    let pool = raw(&docs.pool_json)?;
    let extended = raw(&docs.extended_json)?;
    Ok(to_body(&BlendResponse {
        session: SessionDoc {
            id: session_id(idiom1, idiom2, settings),
            idiom1: idiom1.name(),
            idiom2: idiom2.name(),
            answers: answers_to_value(settings.arguments),
            capacity: settings.capacity,
            bridge_mass: settings.bridge_mass,
        },
        pool: &pool,
        extended: &extended,
    }))
}

async fn blend(State(state): State<AppState>, body: Bytes) -> Result<Response, AppError> {
    let request = blend_request(&state.registry, &parse_body(&body)?, "")?;
    let body = blocking(move || blend_response_body(&request.idiom1, &request.idiom2, request.settings)).await?;
    Ok(json_response(StatusCode::OK, body))
}

/// Resolves the `source` of a sample request to a labelled matrix. A source
/// is one of `{"idiom": name}`, `{"blend": <blend request>}`,
/// `{"extended": <em/1 document>}` or `{"matrix": {chords, matrix}}`.
fn sample_source(registry: &Registry, value: &Value, path: &str) -> Result<(Vec<Chord>, TransitionMatrix), AppError> {
    let map = schema::object(value, path)?;
    let mut keys = map.keys();
    let (Some(key), None) = (keys.next(), keys.next()) else {
        return Err(AppError::schema(path, "expected exactly one of idiom, blend, extended, matrix"));
    };
    let inner = &map[key];
    let at = child(path, key);
    match key.as_str() {
        "idiom" => {
            let idiom = registry.get(schema::string(inner, &at)?)?;
            Ok((idiom.chords().to_vec(), idiom.matrix().clone()))
        }
        "blend" => {
            let request = blend_request(registry, inner, &at)?;
            let em = run_blend(&request.idiom1, &request.idiom2, request.settings)?.extended;
            Ok((em.chords().to_vec(), em.matrix().clone()))
        }
        "extended" => {
            let em = extended_from_value(inner, &at)?;
            Ok((em.chords().to_vec(), em.matrix().clone()))
        }
        "matrix" => {
            let m = schema::object(inner, &at)?;
            schema::only_keys(m, &at, &["chords", "matrix"])?;
            let chords_path = child(&at, "chords");
            let chords = schema::strings(schema::field(m, &at, "chords")?, &chords_path)?
                .into_iter()
                .enumerate()
                .map(|(i, s)| parse_chord(s, &child(&chords_path, i)))
                .collect::<Result<Vec<_>, _>>()?;
            let matrix = matrix_from_value(schema::field(m, &at, "matrix")?, &child(&at, "matrix"), chords.len())?;
            Ok((chords, matrix))
        }
        _ => Err(AppError::schema(at, "expected one of idiom, blend, extended, matrix")),
    }
}

async fn sample(State(state): State<AppState>, body: Bytes) -> Result<Response, AppError> {
    let value = parse_body(&body)?;
    let registry = Arc::clone(&state.registry);
    let body = blocking(move || {
        let map = schema::object(&value, "")?;
        schema::only_keys(map, "", &["source", "start", "length", "seed"])?;
        let start = parse_chord(schema::string(schema::field(map, "", "start")?, "/start")?, "/start")?;
        let length = schema::unsigned(schema::field(map, "", "length")?, "/length")?;
        let length = usize::try_from(length).map_err(|_| AppError::schema("/length", "length is too large"))?;
        let seed = schema::unsigned(schema::field(map, "", "seed")?, "/seed")?;
        let (chords, matrix) = sample_source(&registry, schema::field(map, "", "source")?, "/source")?;
        let walk = sample_chords(&chords, &matrix, start, length, seed)?;
        Ok(walk_to_json(&walk))
    })
    .await?;
    Ok(json_response(StatusCode::OK, body))
}
