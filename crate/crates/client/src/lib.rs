//! Typed async client for `semipos-server`.

use serde::de::DeserializeOwned;
use serde::Serialize;

use semipos_core::api::{
    BoundsRequest, CopositiveRequest, EigenRequest, ErrorBody, GenerateRequest, Health, NormsRequest, SolveRequest,
    SolveResponse, TensorRequest, VerifyBoundsRequest, VerifyRequest,
};
use semipos_core::bounds::{BoundsReport, HarnessOutput};
use semipos_core::eigen::SpectrumSummary;
use semipos_core::generate::Generated;
use semipos_core::norms::NormReport;
use semipos_core::spositivity::{BetaResult, Classification, CopositivityReport};
use semipos_core::tcp::VerifyReport;

#[derive(Debug, thiserror::Error)]
pub enum ClientError {
    /// The server answered with an error body.
    #[error("server returned {status}: {}", body.message)]
    Api { status: u16, body: ErrorBody },
    #[error("transport error: {0}")]
    Transport(String),
    #[error("could not decode response: {0}")]
    Decode(String),
}

pub type Result<T> = std::result::Result<T, ClientError>;

#[derive(Debug, Clone)]
pub struct Client {
    base: String,
    http: reqwest::Client,
}

impl Client {
    /// `base` is the server root, e.g. `http://127.0.0.1:8080`.
    pub fn new(base: impl Into<String>) -> Self {
        let base = base.into().trim_end_matches('/').to_string();
        Client { base, http: reqwest::Client::new() }
    }

    pub fn base_url(&self) -> &str {
        &self.base
    }

    async fn decode<T: DeserializeOwned>(resp: reqwest::Response) -> Result<T> {
        let status = resp.status().as_u16();
        let bytes = resp.bytes().await.map_err(|e| ClientError::Transport(e.to_string()))?;
        if status >= 400 {
            let body: ErrorBody = serde_json::from_slice(&bytes)
                .map_err(|e| ClientError::Decode(format!("{e} in error body: {}", String::from_utf8_lossy(&bytes))))?;
            return Err(ClientError::Api { status, body });
        }
        serde_json::from_slice(&bytes).map_err(|e| ClientError::Decode(e.to_string()))
    }

    async fn post<B: Serialize, T: DeserializeOwned>(&self, path: &str, body: &B) -> Result<T> {
        let payload = serde_json::to_vec(body).map_err(|e| ClientError::Decode(e.to_string()))?;
        let resp = self
            .http
            .post(format!("{}{path}", self.base))
            .header("content-type", "application/json")
            .body(payload)
            .send()
            .await
            .map_err(|e| ClientError::Transport(e.to_string()))?;
        Self::decode(resp).await
    }

    pub async fn health(&self) -> Result<Health> {
        let resp = self
            .http
            .get(format!("{}/health", self.base))
            .send()
            .await
            .map_err(|e| ClientError::Transport(e.to_string()))?;
        Self::decode(resp).await
    }

    pub async fn classify(&self, req: &TensorRequest) -> Result<Classification> {
        self.post("/v1/classify", req).await
    }

    pub async fn beta(&self, req: &TensorRequest) -> Result<BetaResult> {
        self.post("/v1/beta", req).await
    }

    pub async fn copositive(&self, req: &CopositiveRequest) -> Result<CopositivityReport> {
        self.post("/v1/copositive", req).await
    }

    pub async fn eigen(&self, req: &EigenRequest) -> Result<SpectrumSummary> {
        self.post("/v1/eigen", req).await
    }

    pub async fn norms(&self, req: &NormsRequest) -> Result<Vec<NormReport>> {
        self.post("/v1/norms", req).await
    }

    pub async fn solve(&self, req: &SolveRequest) -> Result<SolveResponse> {
        self.post("/v1/solve", req).await
    }

    pub async fn verify(&self, req: &VerifyRequest) -> Result<VerifyReport> {
        self.post("/v1/verify", req).await
    }

    pub async fn bounds(&self, req: &BoundsRequest) -> Result<BoundsReport> {
        self.post("/v1/bounds", req).await
    }

    pub async fn verify_bounds(&self, req: &VerifyBoundsRequest) -> Result<HarnessOutput> {
        self.post("/v1/verify-bounds", req).await
    }

    pub async fn generate(&self, req: &GenerateRequest) -> Result<Generated> {
        self.post("/v1/generate", req).await
    }
}
