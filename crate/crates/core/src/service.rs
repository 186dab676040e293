//! JSON-over-HTTP front end.

use std::net::SocketAddr;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::State;
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::Router;

use crate::api::{to_json, Engine, Failure, FailureKind};

pub fn router(engine: Arc<Engine>) -> Router {
    Router::new()
        .route("/api/health", get(health))
        .route("/api/catalog", get(catalog))
        .route("/api/schema", get(schema))
        .route("/api/optimize", post(optimize))
        .route("/api/evaluate", post(evaluate))
        .with_state(engine)
}

pub async fn serve(addr: SocketAddr, engine: Arc<Engine>) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, router(engine)).await
}

fn json_response(status: StatusCode, body: String) -> Response {
    (status, [(header::CONTENT_TYPE, "application/json")], body).into_response()
}

fn respond(result: Result<String, Failure>) -> Response {
    match result {
        Ok(body) => json_response(StatusCode::OK, body),
        Err(f) => {
            let status = match f.kind {
                FailureKind::InvalidInput => StatusCode::BAD_REQUEST,
                FailureKind::Infeasible => StatusCode::UNPROCESSABLE_ENTITY,
                FailureKind::Internal => StatusCode::INTERNAL_SERVER_ERROR,
            };
            json_response(status, to_json(&f))
        }
    }
}

fn body_text(body: &Bytes) -> Result<&str, Failure> {
    std::str::from_utf8(body).map_err(|e| Failure {
        kind: FailureKind::InvalidInput,
        error: format!("body is not UTF-8: {e}"),
        step: None,
        violations: Vec::new(),
    })
}

async fn health() -> &'static str {
    "ok"
}

async fn catalog(State(engine): State<Arc<Engine>>) -> Response {
    json_response(StatusCode::OK, to_json(&engine.catalog))
}

async fn schema() -> Response {
    json_response(StatusCode::OK, crate::schema::api_schema_json())
}

async fn optimize(State(engine): State<Arc<Engine>>, body: Bytes) -> Response {
    respond(body_text(&body).and_then(|b| engine.optimize_json(b)))
}

async fn evaluate(State(engine): State<Arc<Engine>>, body: Bytes) -> Response {
    respond(body_text(&body).and_then(|b| engine.evaluate_json(b)))
}
