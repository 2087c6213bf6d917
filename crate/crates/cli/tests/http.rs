use arrangeline_cli::api::router;
use axum::body::Body;
use axum::http::{Method, Request, StatusCode};
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

async fn call(method: Method, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
    let req = Request::builder()
        .method(method)
        .uri(uri)
        .header("content-type", "application/json")
        .body(match body {
            Some(v) => Body::from(v.to_string()),
            None => Body::empty(),
        })
        .unwrap();
    let resp = router().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    (status, serde_json::from_slice(&bytes).unwrap())
}

async fn raw_post(uri: &str, body: &'static str) -> (StatusCode, Value) {
    let req = Request::builder()
        .method(Method::POST)
        .uri(uri)
        .body(Body::from(body))
        .unwrap();
    let resp = router().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    (status, serde_json::from_slice(&bytes).unwrap())
}

fn assert_api_error(v: &Value) {
    assert!(v["code"].is_string() && v["message"].is_string(), "{v}");
}

#[tokio::test]
async fn generate_level_one() {
    let (status, v) = call(Method::GET, "/api/generate?level=1&seed=7", None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["l"], 4);
    assert_eq!(v["graph"]["n"], 6);
    assert_eq!(v["graph"]["edges"].as_array().unwrap().len(), 8);
    assert_eq!(v["layout"].as_array().unwrap().len(), 6);
    let (_, again) = call(Method::GET, "/api/generate?level=1&seed=7", None).await;
    assert_eq!(v, again);
}

#[tokio::test]
async fn generate_bad_params() {
    for uri in ["/api/generate", "/api/generate?level=x", "/api/generate?level=0", "/api/generate?level=1&seed=-1"] {
        let (status, v) = call(Method::GET, uri, None).await;
        assert_eq!(status, StatusCode::BAD_REQUEST, "{uri}");
        assert_api_error(&v);
    }
}

#[tokio::test]
async fn recognize_accepts_and_rejects() {
    let (status, v) = call(Method::POST, "/api/recognize", Some(json!({"n":3,"edges":[[0,1],[1,2],[2,0]]}))).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["l"], 3);

    let k5 = json!({"n":5,"edges":[[0,1],[0,2],[0,3],[0,4],[1,2],[1,3],[1,4],[2,3],[2,4],[3,4]]});
    let (status, v) = call(Method::POST, "/api/recognize", Some(k5)).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(v["code"], "NOT_PLANAR");
    assert!(v["witness"].is_object());

    let (status, v) = raw_post("/api/recognize", "{\"n\":").await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(v["code"], "MALFORMED_JSON");
}

#[tokio::test]
async fn draw_and_check_agree() {
    let (_, gen) = call(Method::GET, "/api/generate?level=4&seed=3", None).await;
    let graph = gen["graph"].clone();
    let (status, d) = call(Method::POST, "/api/draw", Some(json!({"graph": graph, "optimizeCuts": true}))).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(d["height"], 6);

    // the UI sends scaled browser coordinates
    let positions: Value = d["positions"]
        .as_object()
        .unwrap()
        .iter()
        .map(|(k, p)| (k.clone(), json!([p[0].as_f64().unwrap() * 37.5 + 0.25, p[1].as_f64().unwrap() * 37.5])))
        .collect::<serde_json::Map<_, _>>()
        .into();
    let (status, r) = call(Method::POST, "/api/check", Some(json!({"positions": positions, "edges": graph["edges"]}))).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(r["crossings"], json!([]));
    assert_eq!(r["planar"], true);
    assert_eq!(r["snap"], 1 << 20);

    // the tangled circular start is not planar
    let (_, r) = call(Method::POST, "/api/check", Some(json!({"positions": gen["layout"], "edges": graph["edges"]}))).await;
    assert!(!r["crossings"].as_array().unwrap().is_empty());
}

#[tokio::test]
async fn check_flags_vertex_on_edge_and_bad_input() {
    let body = json!({"positions": [[0.0, 0.0], [2.0, 0.0], [1.0, 0.0]], "edges": [[0, 1]]});
    let (status, r) = call(Method::POST, "/api/check", Some(body)).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(r["vertexOnEdge"], json!([[2, 0]]));
    assert_eq!(r["planar"], false);

    let body = json!({"positions": [[0.0, 0.0], [1e300, 0.0]], "edges": [[0, 1]]});
    assert_eq!(call(Method::POST, "/api/check", Some(body)).await.0, StatusCode::BAD_REQUEST);
    let body = json!({"positions": [[0.0, 0.0]], "edges": [[0, 3]]});
    assert_eq!(call(Method::POST, "/api/check", Some(body)).await.0, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn solve_plan_ear_count() {
    for level in 1..=5usize {
        let l = level + 3;
        let (_, gen) = call(Method::GET, &format!("/api/generate?level={level}&seed=21"), None).await;
        let (status, plan) = call(Method::POST, "/api/solve-plan", Some(json!({"graph": gen["graph"]}))).await;
        assert_eq!(status, StatusCode::OK);
        assert!(plan["initialCycle"].as_array().unwrap().len() >= 3);
        assert_eq!(plan["ears"].as_array().unwrap().len(), (l - 1) * (l - 2) / 2 - 1);
    }
    let (status, v) = call(Method::POST, "/api/solve-plan", Some(json!({"graph": {"n": 4, "edges": [[0,1],[1,2],[2,3],[3,0]]}}))).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_api_error(&v);
    let (status, _) = call(
        Method::POST,
        "/api/solve-plan",
        Some(json!({"graph": {"n":3,"edges":[[0,1],[1,2],[2,0]]}, "start": 9})),
    )
    .await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn unknown_routes_carry_api_errors() {
    let (status, v) = call(Method::GET, "/api/nothing", None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert_api_error(&v);
    let (status, v) = call(Method::GET, "/api/recognize", None).await;
    assert_eq!(status, StatusCode::METHOD_NOT_ALLOWED);
    assert_api_error(&v);
}

#[tokio::test]
async fn cors_allows_any_origin() {
    let req = Request::builder()
        .method(Method::OPTIONS)
        .uri("/api/check")
        .header("origin", "http://localhost:5173")
        .header("access-control-request-method", "POST")
        .body(Body::empty())
        .unwrap();
    let resp = router().oneshot(req).await.unwrap();
    assert!(resp.headers().contains_key("access-control-allow-origin"));
}

#[tokio::test]
async fn concurrent_requests_are_independent() {
    let tasks: Vec<_> = (0..16u64)
        .map(|seed| {
            tokio::spawn(async move {
                let uri = format!("/api/generate?level=2&seed={}", seed % 4);
                call(Method::GET, &uri, None).await.1
            })
        })
        .collect();
    let mut out = Vec::new();
    for t in tasks {
        out.push(t.await.unwrap());
    }
    for (i, v) in out.iter().enumerate() {
        assert_eq!(v, &out[i % 4]);
    }
}
