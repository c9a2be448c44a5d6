//! HTTP/JSON front end. Every computation runs on the blocking pool, inside
//! a rayon pool sized by the request's `config.threads` when set.

use std::net::SocketAddr;

use axum::body::Bytes;
use axum::extract::rejection::BytesRejection;
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::de::DeserializeOwned;
use serde::Serialize;
use tokio::net::TcpListener;
use tokio::task::JoinHandle;

use semipos_core::api::{
    self, BoundsRequest, CopositiveRequest, EigenRequest, ErrorBody, ErrorKind, GenerateRequest, Health, NormsRequest,
    SolveRequest, TensorRequest, VerifyBoundsRequest, VerifyRequest,
};
use semipos_core::config::Config;
use semipos_core::{bounds, eigen, generate, spositivity, tcp, Error};

pub struct ApiError(ErrorBody);

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        ApiError(ErrorBody::from(&e))
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let status = StatusCode::from_u16(self.0.error.status()).unwrap_or(StatusCode::INTERNAL_SERVER_ERROR);
        (status, Json(self.0)).into_response()
    }
}

fn invalid(message: String) -> ApiError {
    ApiError(ErrorBody { error: ErrorKind::InvalidInput, message })
}

fn parse<T: DeserializeOwned>(body: Result<Bytes, BytesRejection>) -> Result<T, ApiError> {
    let body = body.map_err(|e| invalid(e.body_text()))?;
    serde_json::from_slice(&body).map_err(|e| invalid(format!("malformed request: {e}")))
}

/// Runs `f` off the async executor.
async fn compute<T, F>(cfg: Config, f: F) -> Result<Json<T>, ApiError>
where
    T: Serialize + Send + 'static,
    F: FnOnce(&Config) -> semipos_core::Result<T> + Send + 'static,
{
    let joined = tokio::task::spawn_blocking(move || cfg.install(|| f(&cfg))).await;
    match joined {
        Ok(r) => Ok(Json(r?)),
        Err(e) => Err(ApiError(ErrorBody { error: ErrorKind::Internal, message: e.to_string() })),
    }
}

async fn health() -> Json<Health> {
    Json(Health { status: "ok".into(), version: env!("CARGO_PKG_VERSION").into() })
}

async fn classify(body: Result<Bytes, BytesRejection>) -> Result<Response, ApiError> {
    let req: TensorRequest = parse(body)?;
    let t = req.tensor;
    Ok(compute(req.config, move |c| Ok(spositivity::classify(&t, c))).await?.into_response())
}

async fn beta(body: Result<Bytes, BytesRejection>) -> Result<Response, ApiError> {
    let req: TensorRequest = parse(body)?;
    let t = req.tensor;
    Ok(compute(req.config, move |c| Ok(spositivity::beta(&t, c))).await?.into_response())
}

async fn copositive(body: Result<Bytes, BytesRejection>) -> Result<Response, ApiError> {
    let req: CopositiveRequest = parse(body)?;
    let (t, strict) = (req.tensor, req.strict);
    Ok(compute(req.config, move |c| spositivity::is_copositive(&t, strict, c)).await?.into_response())
}

async fn eigen_spectrum(body: Result<Bytes, BytesRejection>) -> Result<Response, ApiError> {
    let req: EigenRequest = parse(body)?;
    let (t, kind) = (req.tensor, req.kind);
    Ok(compute(req.config, move |c| eigen::spectrum(&t, kind, c)).await?.into_response())
}

async fn norms(body: Result<Bytes, BytesRejection>) -> Result<Response, ApiError> {
    let req: NormsRequest = parse(body)?;
    let cfg = req.config.clone();
    Ok(compute(cfg, move |_| api::run_norms(&req)).await?.into_response())
}

async fn solve(body: Result<Bytes, BytesRejection>) -> Result<Response, ApiError> {
    let req: SolveRequest = parse(body)?;
    let cfg = req.config.clone();
    Ok(compute(cfg, move |_| api::run_solve(&req)).await?.into_response())
}

async fn verify(body: Result<Bytes, BytesRejection>) -> Result<Response, ApiError> {
    let req: VerifyRequest = parse(body)?;
    Ok(compute(Config::default(), move |_| tcp::verify_solution(&req.instance, &req.x)).await?.into_response())
}

async fn bounds_for_instance(body: Result<Bytes, BytesRejection>) -> Result<Response, ApiError> {
    let req: BoundsRequest = parse(body)?;
    let (inst, opts) = (req.instance, req.options);
    Ok(compute(req.config, move |c| bounds::evaluate_instance(&inst, 0, c, opts)).await?.into_response())
}

async fn verify_bounds(body: Result<Bytes, BytesRejection>) -> Result<Response, ApiError> {
    let req: VerifyBoundsRequest = parse(body)?;
    let (spec, count, opts) = (req.spec, req.count, req.options);
    Ok(compute(req.config, move |c| bounds::verify_bounds(&spec, count, c, opts)).await?.into_response())
}

async fn generate_tensor(body: Result<Bytes, BytesRejection>) -> Result<Response, ApiError> {
    let req: GenerateRequest = parse(body)?;
    let spec = req.spec;
    Ok(compute(req.config, move |c| generate::generate(&spec, c)).await?.into_response())
}

pub fn router() -> Router {
    Router::new()
        .route("/health", get(health))
        .route("/v1/classify", post(classify))
        .route("/v1/beta", post(beta))
        .route("/v1/copositive", post(copositive))
        .route("/v1/eigen", post(eigen_spectrum))
        .route("/v1/norms", post(norms))
        .route("/v1/solve", post(solve))
        .route("/v1/verify", post(verify))
        .route("/v1/bounds", post(bounds_for_instance))
        .route("/v1/verify-bounds", post(verify_bounds))
        .route("/v1/generate", post(generate_tensor))
}

pub async fn serve(listener: TcpListener) -> std::io::Result<()> {
    axum::serve(listener, router()).await
}

/// Binds `addr` (port 0 picks a free port) and serves in the background.
pub async fn spawn(addr: SocketAddr) -> std::io::Result<(SocketAddr, JoinHandle<std::io::Result<()>>)> {
    let listener = TcpListener::bind(addr).await?;
    let local = listener.local_addr()?;
    Ok((local, tokio::spawn(serve(listener))))
}
