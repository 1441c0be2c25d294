//! Read-only HTTP query service.

use std::collections::HashMap;
use std::net::SocketAddr;
use std::sync::Arc;

use axum::extract::{Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::get;
use axum::Router;
use serde::Serialize;
use serde_json::{json, Value};

use crate::bundle::PDBundle;
use crate::error::Error;
use crate::query::Locator;
use crate::rational::{parse_rational, to_decimal, Point};

struct Shared {
    bundle: PDBundle,
    locator: Locator,
    meta: String,
    geometry: String,
}

fn point_json(p: &Point) -> Value {
    json!([to_decimal(&p.x), to_decimal(&p.y)])
}

#[derive(Serialize)]
struct Meta {
    #[serde(rename = "N")]
    n: usize,
    m: usize,
    kappa: usize,
    mu: usize,
    bbox: [Value; 2],
}

#[derive(Serialize)]
struct DiagramBody {
    face_id: usize,
    points: Vec<[String; 2]>,
}

pub fn meta_json(b: &PDBundle) -> String {
    let s = b.stats();
    let (lo, hi) = b.filtration().base().bbox();
    let meta = Meta {
        n: s.n,
        m: s.m,
        kappa: s.kappa,
        mu: s.mu,
        bbox: [point_json(&lo), point_json(&hi)],
    };
    serde_json::to_string(&meta).expect("meta serializes")
}

/// Live vertices, edges with swap-pair counts, and faces as vertex loops.
pub fn geometry_json(b: &PDBundle) -> Value {
    let arr = b.arrangement();
    let vertices: Vec<Value> = (0..arr.vertices().len())
        .filter(|&v| arr.vertex(v).alive)
        .map(|v| json!({"id": v, "point": point_json(arr.point(v))}))
        .collect();
    let edges: Vec<Value> = (0..arr.edges().len())
        .filter(|&e| arr.edges()[e].alive)
        .map(|e| {
            let h = 2 * e;
            json!({
                "id": e,
                "from": arr.half_edge(h).origin,
                "to": arr.dest(h),
                "pairs": arr.edges()[e].label.len(),
            })
        })
        .collect();
    let faces: Vec<Value> = arr
        .live_faces()
        .map(|f| json!({"id": f, "loop": arr.face_polygon(f)}))
        .collect();
    json!({"vertices": vertices, "edges": edges, "faces": faces})
}

fn json_response(status: StatusCode, body: String) -> Response {
    (status, [(header::CONTENT_TYPE, "application/json")], body).into_response()
}

fn error_response(status: StatusCode, msg: &str) -> Response {
    json_response(status, json!({"error": msg}).to_string())
}

async fn meta(State(s): State<Arc<Shared>>) -> Response {
    json_response(StatusCode::OK, s.meta.clone())
}

async fn geometry(State(s): State<Arc<Shared>>) -> Response {
    json_response(StatusCode::OK, s.geometry.clone())
}

async fn diagram(State(s): State<Arc<Shared>>, Query(params): Query<HashMap<String, String>>) -> Response {
    let coord = |k: &str| params.get(k).and_then(|v| parse_rational(v).ok());
    let (Some(x), Some(y)) = (coord("x"), coord("y")) else {
        return error_response(StatusCode::BAD_REQUEST, "x and y must be decimal numbers");
    };
    let Some(q) = params.get("q").and_then(|v| v.parse::<usize>().ok()) else {
        return error_response(StatusCode::BAD_REQUEST, "q must be a non-negative integer");
    };
    match s.locator.diagram(&s.bundle, &Point::new(x, y), q) {
        Ok((face, d)) => {
            let body = DiagramBody {
                face_id: face,
                points: d.points.iter().map(|p| [to_decimal(&p.birth), p.death_string()]).collect(),
            };
            json_response(StatusCode::OK, serde_json::to_string(&body).expect("diagram serializes"))
        }
        Err(Error::OutsideBase(_)) => error_response(StatusCode::NOT_FOUND, "outside base space"),
        Err(e) => error_response(StatusCode::INTERNAL_SERVER_ERROR, &e.to_string()),
    }
}

pub fn router(bundle: PDBundle) -> Router {
    let locator = Locator::new(&bundle);
    let shared = Shared {
        meta: meta_json(&bundle),
        geometry: geometry_json(&bundle).to_string(),
        bundle,
        locator,
    };
    Router::new()
        .route("/meta", get(meta))
        .route("/geometry", get(geometry))
        .route("/diagram", get(diagram))
        .with_state(Arc::new(shared))
}

/// Serves on `127.0.0.1:port` until the process is stopped.
pub async fn serve(bundle: PDBundle, port: u16) -> std::io::Result<()> {
    let addr = SocketAddr::from(([127, 0, 0, 1], port));
    let listener = tokio::net::TcpListener::bind(addr).await?;
    serve_on(bundle, listener).await
}

pub async fn serve_on(bundle: PDBundle, listener: tokio::net::TcpListener) -> std::io::Result<()> {
    log::info!("listening on {}", listener.local_addr()?);
    axum::serve(listener, router(bundle)).await
}
