//! Stateless HTTP/JSON facade. Every non-2xx response carries an
//! [`ApiError`] body: 400 for malformed input, 422 for rejected input.

use std::collections::HashMap;

use axum::body::Bytes;
use axum::extract::Query;
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use tower_http::cors::CorsLayer;

use arrangeline_core::ArrangementGraph;

use crate::ops::{self, ApiError, CheckRequest, DrawOptions, Failure};

pub fn router() -> Router {
    Router::new()
        .route("/api/generate", get(generate))
        .route("/api/recognize", post(recognize))
        .route("/api/draw", post(draw))
        .route("/api/solve-plan", post(solve_plan))
        .route("/api/check", post(check))
        .fallback(not_found)
        .method_not_allowed_fallback(method_not_allowed)
        .layer(CorsLayer::permissive())
}

fn reply<T: Serialize>(r: Result<T, Failure>) -> Response {
    match r {
        Ok(v) => Json(v).into_response(),
        Err(f) => {
            let status = match f {
                Failure::Input(_) => StatusCode::BAD_REQUEST,
                Failure::Rejected(_) => StatusCode::UNPROCESSABLE_ENTITY,
                Failure::Internal(_) => StatusCode::INTERNAL_SERVER_ERROR,
            };
            (status, Json(f.error().clone())).into_response()
        }
    }
}

fn body<T: serde::de::DeserializeOwned>(bytes: &Bytes) -> Result<T, Failure> {
    let text = std::str::from_utf8(bytes).map_err(|_| Failure::input("MALFORMED_JSON", "body is not UTF-8"))?;
    ops::parse(text)
}

fn param<T: std::str::FromStr>(q: &HashMap<String, String>, key: &str) -> Result<Option<T>, Failure> {
    q.get(key)
        .map(|v| {
            v.parse()
                .map_err(|_| Failure::input("BAD_PARAMETER", format!("{key}={v:?} is not a valid number")))
        })
        .transpose()
}

async fn generate(Query(q): Query<HashMap<String, String>>) -> Response {
    reply((|| {
        let level = param::<usize>(&q, "level")?.ok_or_else(|| Failure::input("BAD_PARAMETER", "level is required"))?;
        let seed = param::<u64>(&q, "seed")?.unwrap_or(0);
        ops::generate(None, Some(level), seed)
    })())
}

async fn recognize(bytes: Bytes) -> Response {
    reply(body::<ArrangementGraph>(&bytes).and_then(|g| ops::recognize_graph(&g)))
}

#[derive(Deserialize)]
struct DrawRequest {
    graph: ArrangementGraph,
    #[serde(flatten)]
    options: DrawOptions,
}

async fn draw(bytes: Bytes) -> Response {
    reply(body::<DrawRequest>(&bytes).and_then(|r| ops::draw_graph(&r.graph, r.options).map(|(d, _)| d)))
}

#[derive(Deserialize)]
struct SolveRequest {
    graph: ArrangementGraph,
    #[serde(default)]
    start: Option<usize>,
}

async fn solve_plan(bytes: Bytes) -> Response {
    reply(body::<SolveRequest>(&bytes).and_then(|r| ops::solve_plan(&r.graph, r.start)))
}

async fn check(bytes: Bytes) -> Response {
    reply(body::<CheckRequest>(&bytes).and_then(|r| ops::check(&r)))
}

async fn not_found() -> Response {
    let e = ApiError {
        code: "NOT_FOUND".into(),
        message: "no such endpoint".into(),
        witness: None,
    };
    (StatusCode::NOT_FOUND, Json(e)).into_response()
}

async fn method_not_allowed() -> Response {
    let e = ApiError {
        code: "METHOD_NOT_ALLOWED".into(),
        message: "method not allowed on this endpoint".into(),
        witness: None,
    };
    (StatusCode::METHOD_NOT_ALLOWED, Json(e)).into_response()
}

/// Serves until interrupted.
pub async fn serve(addr: std::net::SocketAddr) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router())
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
