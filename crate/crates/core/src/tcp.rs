//! Tensor complementarity problems: find `x >= 0` with
//! `w = q + A x^{m-1} >= 0` and `x.w = 0`.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::error::{Error, Result};
use crate::norms::{norm_bound, Operator};
use crate::rng::{self, stream};
use crate::solve::{damped_newton, NewtonOptions};
use crate::tensor::{IndexSet, Tensor};
use crate::vector::{distance_inf, dot, ensure_finite, lex_cmp, norm_inf, NormP};

/// Certificate tolerance on every residual.
pub const CERT_TOL: f64 = 1e-8;
const POSITIVE_FLOOR: f64 = 1e-10;
const CLUSTER_TOL: f64 = 1e-6;
const MERIT_TOL: f64 = 1e-10;
const MAX_ITER: usize = 10_000;
/// Iterate until the step stalls: a zero `q_i` makes `y_i = 0` a multiple
/// root, which Newton approaches only linearly and must not stop early on.
const NEWTON: NewtonOptions = NewtonOptions { max_iter: 200, step_tol: 1e-12, residual_tol: 0.0 };

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawInstance")]
pub struct TcpInstance {
    pub tensor: Tensor,
    pub q: Vec<f64>,
}

#[derive(Deserialize)]
struct RawInstance {
    tensor: Tensor,
    q: Vec<f64>,
}

impl TryFrom<RawInstance> for TcpInstance {
    type Error = Error;
    fn try_from(r: RawInstance) -> Result<Self> {
        TcpInstance::new(r.tensor, r.q)
    }
}

impl TcpInstance {
    pub fn new(tensor: Tensor, q: Vec<f64>) -> Result<Self> {
        if q.len() != tensor.dim() {
            return Err(Error::DimensionMismatch { expected: tensor.dim(), got: q.len() });
        }
        ensure_finite(&q, "q")?;
        Ok(TcpInstance { tensor, q })
    }

    pub fn dim(&self) -> usize {
        self.tensor.dim()
    }

    /// `w = q + A x^{m-1}`.
    pub fn w(&self, x: &[f64]) -> Vec<f64> {
        let ax = self.tensor.contract_m1_unchecked(x);
        self.q.iter().zip(ax).map(|(q, a)| q + a).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Enumeration,
    Iterative,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Residuals {
    /// `min_i x_i`
    pub primal: f64,
    /// `min_i w_i`
    pub dual: f64,
    /// `|x.w|`
    pub compl: f64,
}

impl Residuals {
    pub fn compute(x: &[f64], w: &[f64]) -> Self {
        Residuals {
            primal: x.iter().cloned().fold(f64::INFINITY, f64::min),
            dual: w.iter().cloned().fold(f64::INFINITY, f64::min),
            compl: dot(x, w).abs(),
        }
    }

    pub fn pass(&self) -> bool {
        self.primal >= -CERT_TOL && self.dual >= -CERT_TOL && self.compl <= CERT_TOL
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TcpSolution {
    pub x: Vec<f64>,
    pub w: Vec<f64>,
    /// Indices with `x_i > 0`; empty for the zero solution.
    #[serde(with = "one_based")]
    pub support: Vec<usize>,
    pub residuals: Residuals,
    pub method: Method,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub pass: bool,
    pub w: Vec<f64>,
    pub residuals: Residuals,
    pub failures: Vec<String>,
}

mod one_based {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[usize], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|i| i + 1))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<usize>, D::Error> {
        let raw = Vec::<usize>::deserialize(d)?;
        if raw.contains(&0) {
            return Err(serde::de::Error::custom("supports are 1-based"));
        }
        Ok(raw.into_iter().map(|i| i - 1).collect())
    }
}

/// Recomputes `w` and the residuals of `x` from scratch.
pub fn verify_solution(inst: &TcpInstance, x: &[f64]) -> Result<VerifyReport> {
    if x.len() != inst.dim() {
        return Err(Error::DimensionMismatch { expected: inst.dim(), got: x.len() });
    }
    ensure_finite(x, "x")?;
    let w = inst.tensor.contract_m1(x)?.iter().zip(&inst.q).map(|(a, q)| q + a).collect::<Vec<_>>();
    let residuals = Residuals::compute(x, &w);
    let mut failures = Vec::new();
    if residuals.primal < -CERT_TOL {
        failures.push(format!("primal: min x = {}", residuals.primal));
    }
    if residuals.dual < -CERT_TOL {
        failures.push(format!("dual: min w = {}", residuals.dual));
    }
    if residuals.compl > CERT_TOL {
        failures.push(format!("complementarity: |x.w| = {}", residuals.compl));
    }
    Ok(VerifyReport { pass: failures.is_empty(), w, residuals, failures })
}

fn certify(inst: &TcpInstance, x: Vec<f64>, method: Method) -> Option<TcpSolution> {
    let w = inst.w(&x);
    let residuals = Residuals::compute(&x, &w);
    if !residuals.pass() {
        return None;
    }
    let support = (0..x.len()).filter(|&i| x[i] > 0.0).collect();
    Some(TcpSolution { x, w, support, residuals, method })
}

/// Solves `A_J y^{m-1} = -q_J` for `y > 0`: a linear solve for `m = 2`,
/// multistart Newton otherwise. Returns the distinct positive roots found.
fn support_roots(sub: &Tensor, rhs: &[f64], starts: usize, rng: &mut impl Rng) -> Vec<Vec<f64>> {
    let r = sub.dim();
    let m = sub.order();
    let mut roots: Vec<Vec<f64>> = Vec::new();
    let keep = |y: Vec<f64>, roots: &mut Vec<Vec<f64>>| {
        if y.iter().all(|v| *v > POSITIVE_FLOOR && v.is_finite())
            && !roots.iter().any(|z| distance_inf(z, &y) <= CLUSTER_TOL)
        {
            roots.push(y);
        }
    };

    if m == 2 {
        let mat = DMatrix::from_row_slice(r, r, sub.entries());
        if let Some(y) = mat.lu().solve(&DVector::from_column_slice(rhs)) {
            keep(y.iter().copied().collect(), &mut roots);
        }
        return roots;
    }

    // typical magnitude of a root: |q| / |diag| to the power 1/(m-1)
    let diag = sub.diagonal_entries().iter().map(|d| d.abs()).fold(0.0, f64::max).max(1e-3);
    let scale = (norm_inf(rhs) / diag).powf(1.0 / (m as f64 - 1.0)).max(1e-3);
    let system = |y: &[f64]| {
        let ay = sub.contract_m1_unchecked(y);
        let res = ay.iter().zip(rhs).map(|(a, b)| a - b).collect();
        (res, sub.jacobian_m1(y))
    };
    for s in 0..starts.max(1) {
        let y0: Vec<f64> =
            if s == 0 { vec![scale; r] } else { (0..r).map(|_| scale * rng.gen_range(0.1..1.0)).collect() };
        let out = damped_newton(system, &y0, NEWTON);
        if out.converged {
            keep(out.z, &mut roots);
        }
    }
    roots
}

fn mask_of(j: &IndexSet) -> u64 {
    j.indices().iter().fold(0u64, |m, &i| m | 1 << i)
}

fn sort_solutions(sols: &mut [TcpSolution]) {
    sols.sort_by(|a, b| norm_inf(&a.x).total_cmp(&norm_inf(&b.x)).then_with(|| lex_cmp(&a.x, &b.x)));
}

/// Every certified solution reachable by support enumeration, sorted by
/// `||x||_inf` then lexicographically. An empty list is a valid answer.
pub fn solve_enumeration(inst: &TcpInstance, cfg: &Config) -> Result<Vec<TcpSolution>> {
    let n = inst.dim();
    if n > cfg.enumeration_cap {
        return Err(Error::DimensionCap { n, cap: cfg.enumeration_cap });
    }
    let mut found: Vec<TcpSolution> = certify(inst, vec![0.0; n], Method::Enumeration).into_iter().collect();

    let per_support: Vec<Vec<TcpSolution>> = IndexSet::all_nonempty(n)
        .into_par_iter()
        .map(|j| {
            let sub = inst.tensor.principal_subtensor(&j).expect("support within range");
            let rhs: Vec<f64> = j.indices().iter().map(|&i| -inst.q[i]).collect();
            let mut rng = rng::substream(cfg.seed, &[stream::TCP_ENUM, mask_of(&j)]);
            support_roots(&sub, &rhs, cfg.tcp_starts(), &mut rng)
                .into_iter()
                .filter_map(|y| certify(inst, j.embed(&y, n), Method::Enumeration))
                .collect()
        })
        .collect();

    for sol in per_support.into_iter().flatten() {
        if !found.iter().any(|f| distance_inf(&f.x, &sol.x) <= CLUSTER_TOL) {
            found.push(sol);
        }
    }
    sort_solutions(&mut found);
    Ok(found)
}

/// `||min(x, w)||_2`
fn merit(x: &[f64], w: &[f64]) -> f64 {
    x.iter().zip(w).map(|(a, b)| a.min(*b).powi(2)).sum::<f64>().sqrt()
}

/// Newton on the detected support of an approximate solution, then
/// certification; falls back to certifying `x` itself.
fn polish(inst: &TcpInstance, x: &[f64]) -> Option<TcpSolution> {
    let n = inst.dim();
    let w = inst.w(x);
    let active: Vec<usize> = (0..n).filter(|&i| x[i] > POSITIVE_FLOOR && x[i] >= w[i]).collect();
    if active.is_empty() {
        return certify(inst, vec![0.0; n], Method::Iterative).or_else(|| certify(inst, x.to_vec(), Method::Iterative));
    }
    let j = IndexSet::new(active).expect("sorted, nonempty");
    let sub = inst.tensor.principal_subtensor(&j).expect("support within range");
    let rhs: Vec<f64> = j.indices().iter().map(|&i| -inst.q[i]).collect();
    let out = damped_newton(
        |y| {
            let ay = sub.contract_m1_unchecked(y);
            (ay.iter().zip(&rhs).map(|(a, b)| a - b).collect(), sub.jacobian_m1(y))
        },
        &j.restrict(x),
        NEWTON,
    );
    if out.converged && out.z.iter().all(|v| *v > POSITIVE_FLOOR) {
        if let Some(s) = certify(inst, j.embed(&out.z, n), Method::Iterative) {
            return Some(s);
        }
    }
    certify(inst, x.to_vec(), Method::Iterative)
}

/// Projected iteration from one start; returns the final iterate and merit.
fn project_iterate(inst: &TcpInstance, x0: Vec<f64>, gamma0: f64) -> (Vec<f64>, f64) {
    let mut x = x0;
    let mut w = inst.w(&x);
    let mut phi = merit(&x, &w);
    let mut gamma = gamma0;
    for _ in 0..MAX_ITER {
        if phi <= MERIT_TOL {
            break;
        }
        let mut accepted = false;
        for _ in 0..60 {
            let trial: Vec<f64> = x.iter().zip(&w).map(|(xi, wi)| (xi - gamma * wi).max(0.0)).collect();
            let wt = inst.w(&trial);
            let pt = merit(&trial, &wt);
            if pt.is_finite() && pt < phi {
                x = trial;
                w = wt;
                phi = pt;
                accepted = true;
                gamma *= 1.5;
                break;
            }
            gamma *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    (x, phi)
}

/// Projected fixed-point iteration `x <- max(0, x - γ w)` with step
/// backtracking on the natural residual, multistart on failure. The final
/// iterate is polished by Newton on its support before certification.
pub fn solve_iterative(inst: &TcpInstance, cfg: &Config) -> Result<TcpSolution> {
    let n = inst.dim();
    let bound = norm_bound(&inst.tensor, Operator::T, NormP::Inf)?;
    let gamma0 = 1.0 / (1.0 + bound);
    let m = inst.tensor.order() as f64;
    let dmin = inst.tensor.diagonal_entries().into_iter().filter(|d| *d > 0.0).fold(f64::INFINITY, f64::min);
    let dmin = if dmin.is_finite() { dmin.min(1.0) } else { 1.0 };
    let scale = (norm_inf(&inst.q).max(1.0) / dmin).powf(1.0 / (m - 1.0));

    let mut rng = rng::substream(cfg.seed, &[stream::TCP_ITER]);
    let mut best_merit = f64::INFINITY;
    for s in 0..=cfg.tcp_starts() {
        // Restarts zero about half the coordinates so boundary solutions get
        // seeded from their own face.
        let x0: Vec<f64> = if s == 0 {
            vec![0.0; n]
        } else {
            (0..n).map(|_| if rng.gen_bool(0.5) { 0.0 } else { scale * rng.gen_range(0.0..1.0) }).collect()
        };
        let (x, phi) = project_iterate(inst, x0, gamma0);
        best_merit = best_merit.min(phi);
        if let Some(sol) = polish(inst, &x) {
            return Ok(sol);
        }
    }
    Err(Error::NonConvergence(format!(
        "projected iteration found no certified solution from {} starts (best natural residual {best_merit:e})",
        cfg.tcp_starts() + 1
    )))
}

/// Norm of a solution in the given exponent raised to `m - 1`.
pub fn achieved(x: &[f64], p: NormP, order: usize) -> f64 {
    crate::vector::norm(x, p).powi(order as i32 - 1)
}
