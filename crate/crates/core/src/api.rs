//! Request and response bodies shared by the HTTP server and client.

use serde::{Deserialize, Serialize};

use crate::bounds::{BoundsReport, HarnessOptions, HarnessOutput};
use crate::config::Config;
use crate::eigen::EigenKind;
use crate::error::Error;
use crate::generate::GeneratorSpec;
use crate::norms::Operator;
use crate::tcp::{Method, TcpInstance, TcpSolution};
use crate::tensor::Tensor;
use crate::vector::NormP;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TensorRequest {
    pub tensor: Tensor,
    #[serde(default)]
    pub config: Config,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CopositiveRequest {
    pub tensor: Tensor,
    #[serde(default)]
    pub strict: bool,
    #[serde(default)]
    pub config: Config,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EigenRequest {
    pub tensor: Tensor,
    pub kind: EigenKind,
    #[serde(default)]
    pub config: Config,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NormsRequest {
    pub tensor: Tensor,
    /// Both operators when absent (F only for even order).
    #[serde(default)]
    pub op: Option<Operator>,
    /// 1, 2, m, m/(m-1) and inf when absent.
    #[serde(default)]
    pub p: Option<Vec<NormP>>,
    #[serde(default)]
    pub config: Config,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveMethod {
    /// Enumeration within the dimension cap, iterative beyond it.
    #[default]
    Auto,
    Enumeration,
    Iterative,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolveRequest {
    pub instance: TcpInstance,
    #[serde(default)]
    pub method: SolveMethod,
    #[serde(default)]
    pub config: Config,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    Solved,
    /// Enumeration found nothing; legitimate when the tensor is not a
    /// Q-tensor.
    NoSolutionFound,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveResponse {
    pub status: SolveStatus,
    pub method: Method,
    pub solutions: Vec<TcpSolution>,
    pub message: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerifyRequest {
    pub instance: TcpInstance,
    pub x: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundsRequest {
    pub instance: TcpInstance,
    #[serde(default)]
    pub options: HarnessOptions,
    #[serde(default)]
    pub config: Config,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerifyBoundsRequest {
    pub spec: GeneratorSpec,
    pub count: usize,
    #[serde(default)]
    pub options: HarnessOptions,
    #[serde(default)]
    pub config: Config,
}

pub type VerifyBoundsResponse = HarnessOutput;
pub type BoundsResponse = BoundsReport;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GenerateRequest {
    pub spec: GeneratorSpec,
    #[serde(default)]
    pub config: Config,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Health {
    pub status: String,
    pub version: String,
}

/// Machine-readable error kinds on the wire.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorKind {
    InvalidInput,
    NonConvergence,
    Generator,
    NonpositiveDivisor,
    Internal,
}

impl ErrorKind {
    pub fn of(e: &Error) -> ErrorKind {
        match e {
            Error::NonConvergence(_) => ErrorKind::NonConvergence,
            Error::Generator(_) => ErrorKind::Generator,
            Error::NonpositiveDivisor { .. } => ErrorKind::NonpositiveDivisor,
            _ => ErrorKind::InvalidInput,
        }
    }

    pub fn status(self) -> u16 {
        match self {
            ErrorKind::InvalidInput => 400,
            ErrorKind::NonConvergence | ErrorKind::Generator | ErrorKind::NonpositiveDivisor => 422,
            ErrorKind::Internal => 500,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub error: ErrorKind,
    pub message: String,
}

impl From<&Error> for ErrorBody {
    fn from(e: &Error) -> Self {
        ErrorBody { error: ErrorKind::of(e), message: e.to_string() }
    }
}

/// Norm reports for every requested operator and exponent.
pub fn run_norms(req: &NormsRequest) -> crate::Result<Vec<crate::norms::NormReport>> {
    use crate::norms::{estimate_norm, standard_exponents};
    let m = req.tensor.order();
    let ops: Vec<Operator> = match req.op {
        Some(op) => vec![op],
        None if m.is_multiple_of(2) => vec![Operator::T, Operator::F],
        None => vec![Operator::T],
    };
    let ps = req.p.clone().unwrap_or_else(|| standard_exponents(m));
    let mut out = Vec::new();
    for op in ops {
        for &p in &ps {
            out.push(estimate_norm(&req.tensor, op, p, &req.config)?);
        }
    }
    Ok(out)
}

/// Solves with the requested method; an empty enumeration is a status, not
/// an error.
pub fn run_solve(req: &SolveRequest) -> crate::Result<SolveResponse> {
    use crate::tcp::{solve_enumeration, solve_iterative};
    let cfg = &req.config;
    let use_enum = match req.method {
        SolveMethod::Enumeration => true,
        SolveMethod::Iterative => false,
        SolveMethod::Auto => req.instance.dim() <= cfg.enumeration_cap,
    };
    if use_enum {
        let solutions = solve_enumeration(&req.instance, cfg)?;
        let (status, message) = if solutions.is_empty() {
            (
                SolveStatus::NoSolutionFound,
                "no certified solution on any support; the tensor may not be a Q-tensor".to_string(),
            )
        } else {
            (SolveStatus::Solved, format!("{} certified solution(s)", solutions.len()))
        };
        Ok(SolveResponse { status, method: Method::Enumeration, solutions, message })
    } else {
        let s = solve_iterative(&req.instance, cfg)?;
        Ok(SolveResponse {
            status: SolveStatus::Solved,
            method: Method::Iterative,
            solutions: vec![s],
            message: "certified solution".into(),
        })
    }
}
