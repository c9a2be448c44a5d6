//! Nonnegative and Pareto eigenpairs of small tensors by support enumeration.
//!
//! For every nonempty support `J` the positive eigenpairs of the principal
//! sub-tensor `A_J` are found by multistart damped Newton on
//!
//! * H family: `A_J y^{m-1} = λ y^{[m-1]}`, `y > 0`
//! * Z family: `A_J y^{m-1} = λ y`, `y > 0`, `||y||_2 = 1`
//!
//! and embedded with zeros off `J`. The off-support rows then decide what
//! the embedded pair is: an H+/Z+ eigenpair of `A` needs them to vanish, a
//! Pareto eigenpair needs them nonnegative, and the δ quantities use the
//! sub-tensor pairs as they are.
//!
//! Newton multistart cannot certify that every eigenpair was found; results
//! are flagged [`Completeness::Heuristic`] except for `n = 1` and for
//! order-2 inputs whose per-support eigenvalues are all simple.

use nalgebra::DMatrix;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::error::{Error, Result};
use crate::rng::{self, stream};
use crate::solve::{damped_newton, NewtonOptions};
use crate::tensor::{IndexSet, Tensor};
use crate::vector::{lex_cmp, norm2, norm_inf};

/// Bound on residuals and on off-support equalities.
pub const RESIDUAL_TOL: f64 = 1e-8;
/// Off-support Pareto rows may dip this far below zero.
pub const PARETO_SLACK: f64 = 1e-8;
/// Eigenvector entries at or below this are treated as zero.
const POSITIVE_FLOOR: f64 = 1e-10;
/// Values closer than this (relative) on one support are one eigenvalue.
const CLUSTER_TOL: f64 = 1e-6;
/// Run Newton until the step stalls so that components heading to zero
/// (an eigenvector of a smaller support) fall below the positivity floor.
const NEWTON: NewtonOptions = NewtonOptions { max_iter: 200, step_tol: 1e-12, residual_tol: 0.0 };

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EigenKind {
    H,
    Z,
    HPlus,
    HPlusplus,
    ZPlus,
    ZPlusplus,
    ParetoH,
    ParetoZ,
}

impl EigenKind {
    pub fn family(self) -> Family {
        match self {
            EigenKind::H | EigenKind::HPlus | EigenKind::HPlusplus | EigenKind::ParetoH => Family::H,
            _ => Family::Z,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            EigenKind::H => "h",
            EigenKind::Z => "z",
            EigenKind::HPlus => "h_plus",
            EigenKind::HPlusplus => "h_plusplus",
            EigenKind::ZPlus => "z_plus",
            EigenKind::ZPlusplus => "z_plusplus",
            EigenKind::ParetoH => "pareto_h",
            EigenKind::ParetoZ => "pareto_z",
        }
    }
}

impl std::str::FromStr for EigenKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "h" => EigenKind::H,
            "z" => EigenKind::Z,
            "h_plus" | "h+" => EigenKind::HPlus,
            "h_plusplus" | "h++" => EigenKind::HPlusplus,
            "z_plus" | "z+" => EigenKind::ZPlus,
            "z_plusplus" | "z++" => EigenKind::ZPlusplus,
            "pareto_h" => EigenKind::ParetoH,
            "pareto_z" => EigenKind::ParetoZ,
            other => return Err(Error::Parse(format!("unknown eigen kind {other:?}"))),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    H,
    Z,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    MaxAbs,
    TwoNorm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Completeness {
    ClosedForm,
    Heuristic,
}

impl Completeness {
    fn and(self, other: Completeness) -> Completeness {
        if self == Completeness::ClosedForm && other == Completeness::ClosedForm {
            Completeness::ClosedForm
        } else {
            Completeness::Heuristic
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenRecord {
    pub kind: EigenKind,
    pub value: f64,
    pub vector: Vec<f64>,
    pub support: IndexSet,
    pub residual: f64,
    pub normalization: Normalization,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumSummary {
    pub kind: EigenKind,
    pub records: Vec<EigenRecord>,
    /// Distinct values among `records`.
    pub values: Vec<f64>,
    pub delta_h_plus: Option<f64>,
    pub delta_z_plus: Option<f64>,
    pub lambda_min_pareto_h: Option<f64>,
    pub mu_min_pareto_z: Option<f64>,
    pub completeness: Completeness,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Delta {
    pub value: f64,
    pub support: IndexSet,
    /// Eigenvector of the sub-tensor, indexed by `support`.
    pub vector: Vec<f64>,
    pub completeness: Completeness,
}

/// Positive eigenpairs of one principal sub-tensor.
#[derive(Debug, Clone)]
pub struct SupportPairs {
    pub support: IndexSet,
    /// `(λ, y)` with `y > 0` on the support, normalized per family.
    pub pairs: Vec<(f64, Vec<f64>)>,
    pub completeness: Completeness,
}

fn normalize(family: Family, y: &mut [f64]) {
    let s = match family {
        Family::H => norm_inf(y),
        Family::Z => norm2(y),
    };
    if s > 0.0 {
        y.iter_mut().for_each(|v| *v /= s);
    }
}

fn normalization_of(family: Family) -> Normalization {
    match family {
        Family::H => Normalization::MaxAbs,
        Family::Z => Normalization::TwoNorm,
    }
}

/// `||A x^{m-1} - λ x^{[m-1]}||_inf` (H) or `||A x^{m-1} - λ x||_inf` (Z).
pub fn eigen_residual(a: &Tensor, family: Family, value: f64, x: &[f64]) -> f64 {
    let y = a.contract_m1_unchecked(x);
    let m = a.order() as i32;
    y.iter()
        .zip(x)
        .map(|(yi, xi)| match family {
            Family::H => (yi - value * xi.powi(m - 1)).abs(),
            Family::Z => (yi - value * xi).abs(),
        })
        .fold(0.0, f64::max)
}

/// Newton system in `(y, λ)` with the smooth normalization `y.y = 1`.
fn eigen_system(a: &Tensor, family: Family, z: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let r = a.dim();
    let k = r + 1;
    let (y, lambda) = (&z[..r], z[r]);
    let m = a.order() as i32;
    let ay = a.contract_m1_unchecked(y);
    let ja = a.jacobian_m1(y);
    let mut res = vec![0.0; k];
    let mut jac = vec![0.0; k * k];
    for i in 0..r {
        for j in 0..r {
            jac[i * k + j] = ja[i * r + j];
        }
        match family {
            Family::H => {
                res[i] = ay[i] - lambda * y[i].powi(m - 1);
                jac[i * k + i] -= lambda * (m - 1) as f64 * y[i].powi(m - 2);
                jac[i * k + r] = -y[i].powi(m - 1);
            }
            Family::Z => {
                res[i] = ay[i] - lambda * y[i];
                jac[i * k + i] -= lambda;
                jac[i * k + r] = -y[i];
            }
        }
        jac[r * k + i] = 2.0 * y[i];
    }
    res[r] = y.iter().map(|v| v * v).sum::<f64>() - 1.0;
    (res, jac)
}

fn rayleigh(a: &Tensor, family: Family, y: &[f64]) -> f64 {
    let ay = a.contract_m1_unchecked(y);
    let num: f64 = y.iter().zip(&ay).map(|(p, q)| p * q).sum();
    let den: f64 = match family {
        Family::H => y.iter().map(|v| v.powi(a.order() as i32)).sum(),
        Family::Z => y.iter().map(|v| v * v).sum(),
    };
    num / den
}

/// Appends `(λ, y)` unless a value within the cluster tolerance is present.
fn push_clustered(pairs: &mut Vec<(f64, Vec<f64>)>, value: f64, y: Vec<f64>) {
    let close = |v: f64| (v - value).abs() <= CLUSTER_TOL * value.abs().max(1.0);
    if !pairs.iter().any(|(v, _)| close(*v)) {
        pairs.push((value, y));
    }
}

/// All positive eigenpairs found for a (sub-)tensor; the all-ones direction
/// is always the first start.
pub fn positive_eigenpairs(sub: &Tensor, family: Family, cfg: &Config, task: &[u64]) -> SupportPairs {
    let r = sub.dim();
    let support = IndexSet::full(r);
    if r == 1 {
        return SupportPairs {
            support,
            pairs: vec![(sub.entries()[0], vec![1.0])],
            completeness: Completeness::ClosedForm,
        };
    }

    let mut pairs: Vec<(f64, Vec<f64>)> = Vec::new();
    let mut rng = rng::substream(cfg.seed, task);
    let starts = cfg.eigen_starts().max(1);
    for s in 0..starts {
        let mut y: Vec<f64> = if s == 0 { vec![1.0; r] } else { (0..r).map(|_| rng.gen_range(0.1..1.0)).collect() };
        let n2 = norm2(&y);
        y.iter_mut().for_each(|v| *v /= n2);
        let mut z = y.clone();
        z.push(rayleigh(sub, family, &y));
        let out = damped_newton(|z| eigen_system(sub, family, z), &z, NEWTON);
        if !out.converged {
            continue;
        }
        let lambda = out.z[r];
        let mut y = out.z[..r].to_vec();
        if y.iter().any(|v| *v <= POSITIVE_FLOOR) {
            continue;
        }
        normalize(family, &mut y);
        if eigen_residual(sub, family, lambda, &y) > RESIDUAL_TOL {
            continue;
        }
        push_clustered(&mut pairs, lambda, y);
    }

    let mut completeness = Completeness::Heuristic;
    if sub.order() == 2 {
        completeness = matrix_positive_pairs(sub, &mut pairs);
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then_with(|| lex_cmp(&a.1, &b.1)));
    SupportPairs { support, pairs, completeness }
}

/// Order-2 supplement: real eigenvalues from the Schur form, eigenvectors
/// from the SVD null space. Exact when every eigenvalue is simple.
fn matrix_positive_pairs(sub: &Tensor, pairs: &mut Vec<(f64, Vec<f64>)>) -> Completeness {
    let r = sub.dim();
    let mat = DMatrix::from_row_slice(r, r, sub.entries());
    let scale = mat.amax().max(1.0);
    let mut reals: Vec<f64> =
        mat.complex_eigenvalues().iter().filter(|c| c.im.abs() <= 1e-10 * scale).map(|c| c.re).collect();
    reals.sort_by(f64::total_cmp);
    let total = reals.len();
    reals.dedup_by(|a, b| (*a - *b).abs() <= 1e-9 * scale);
    let mut complete = reals.len() == total && total == r;

    for lambda in reals {
        let shifted = &mat - DMatrix::identity(r, r) * lambda;
        let svd = shifted.svd(false, true);
        let Some(v_t) = svd.v_t else {
            complete = false;
            continue;
        };
        // smallest singular value's right vector
        let (idx, _) = svd.singular_values.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).expect("nonempty");
        let mut y: Vec<f64> = v_t.row(idx).iter().copied().collect();
        if y.iter().sum::<f64>() < 0.0 {
            y.iter_mut().for_each(|v| *v = -*v);
        }
        if y.iter().all(|v| *v > POSITIVE_FLOOR) {
            // polish the eigenvalue against the returned vector
            let value = rayleigh(sub, Family::Z, &y);
            normalize(Family::Z, &mut y);
            if eigen_residual(sub, Family::Z, value, &y) <= RESIDUAL_TOL {
                push_clustered(pairs, value, y);
            }
        }
    }
    if complete {
        Completeness::ClosedForm
    } else {
        Completeness::Heuristic
    }
}

fn mask_of(j: &IndexSet) -> u64 {
    j.indices().iter().fold(0u64, |m, &i| m | 1 << i)
}

/// Positive eigenpairs of every principal sub-tensor, in support order.
pub fn support_pairs(a: &Tensor, family: Family, cfg: &Config) -> Vec<SupportPairs> {
    IndexSet::all_nonempty(a.dim())
        .into_par_iter()
        .map(|j| {
            let sub = a.principal_subtensor(&j).expect("support within range");
            let task = [stream::EIGEN, family as u64, mask_of(&j)];
            let mut sp = positive_eigenpairs(&sub, family, cfg, &task);
            sp.support = j;
            sp
        })
        .collect()
}

fn overall_completeness(a: &Tensor, sps: &[SupportPairs]) -> Completeness {
    if a.dim() == 1 {
        return Completeness::ClosedForm;
    }
    sps.iter().fold(Completeness::ClosedForm, |c, sp| c.and(sp.completeness))
}

fn sort_records(records: &mut [EigenRecord]) {
    records.sort_by(|a, b| {
        a.value.total_cmp(&b.value).then_with(|| a.support.cmp(&b.support)).then_with(|| lex_cmp(&a.vector, &b.vector))
    });
}

/// Embeds support pairs into `R^n` and keeps those whose off-support rows
/// satisfy `accept`.
fn embed_filter(
    a: &Tensor,
    sps: &[SupportPairs],
    kind: EigenKind,
    accept: impl Fn(&[f64], &IndexSet) -> bool,
) -> Vec<EigenRecord> {
    let n = a.dim();
    let family = kind.family();
    let mut out = Vec::new();
    for sp in sps {
        for (value, y) in &sp.pairs {
            let x = sp.support.embed(y, n);
            let ax = a.contract_m1_unchecked(&x);
            if !accept(&ax, &sp.support) {
                continue;
            }
            let residual = match kind {
                // the Pareto inequality rows are not equations
                EigenKind::ParetoH | EigenKind::ParetoZ => {
                    let sub = a.principal_subtensor(&sp.support).expect("support within range");
                    eigen_residual(&sub, family, *value, y)
                }
                _ => eigen_residual(a, family, *value, &x),
            };
            out.push(EigenRecord {
                kind,
                value: *value,
                vector: x,
                support: sp.support.clone(),
                residual,
                normalization: normalization_of(family),
            });
        }
    }
    sort_records(&mut out);
    out
}

fn off_support_zero(ax: &[f64], j: &IndexSet) -> bool {
    ax.iter().enumerate().all(|(i, v)| j.contains(i) || v.abs() <= RESIDUAL_TOL)
}

fn off_support_nonnegative(ax: &[f64], j: &IndexSet) -> bool {
    ax.iter().enumerate().all(|(i, v)| j.contains(i) || *v >= -PARETO_SLACK)
}

fn plus_records(a: &Tensor, sps: &[SupportPairs], kind: EigenKind) -> Vec<EigenRecord> {
    embed_filter(a, sps, kind, off_support_zero)
}

fn plusplus_records(a: &Tensor, sps: &[SupportPairs], kind: EigenKind) -> Vec<EigenRecord> {
    let n = a.dim();
    embed_filter(a, sps, kind, |_, j| j.len() == n)
}

/// Pareto records from precomputed support pairs (`kind` must be a Pareto
/// kind matching the pairs' family).
pub fn pareto_records_from(a: &Tensor, sps: &[SupportPairs], kind: EigenKind) -> Vec<EigenRecord> {
    pareto_records(a, sps, kind)
}

fn pareto_records(a: &Tensor, sps: &[SupportPairs], kind: EigenKind) -> Vec<EigenRecord> {
    embed_filter(a, sps, kind, off_support_nonnegative)
}

/// H+-eigenpairs of `A` (nonnegative eigenvectors).
pub fn h_plus_eigenpairs(a: &Tensor, cfg: &Config) -> Vec<EigenRecord> {
    plus_records(a, &support_pairs(a, Family::H, cfg), EigenKind::HPlus)
}

/// Z+-eigenpairs of `A`.
pub fn z_plus_eigenpairs(a: &Tensor, cfg: &Config) -> Vec<EigenRecord> {
    plus_records(a, &support_pairs(a, Family::Z, cfg), EigenKind::ZPlus)
}

pub fn h_plusplus_eigenpairs(a: &Tensor, cfg: &Config) -> Vec<EigenRecord> {
    plusplus_records(a, &support_pairs(a, Family::H, cfg), EigenKind::HPlusplus)
}

pub fn z_plusplus_eigenpairs(a: &Tensor, cfg: &Config) -> Vec<EigenRecord> {
    plusplus_records(a, &support_pairs(a, Family::Z, cfg), EigenKind::ZPlusplus)
}

/// Pareto H-eigenvalues: H++ pairs of a sub-tensor whose zero extension has
/// nonnegative off-support rows.
pub fn pareto_h_eigenvalues(a: &Tensor, cfg: &Config) -> Vec<EigenRecord> {
    pareto_records(a, &support_pairs(a, Family::H, cfg), EigenKind::ParetoH)
}

/// Pareto Z-eigenvalues; refused for odd order.
pub fn pareto_z_eigenvalues(a: &Tensor, cfg: &Config) -> Result<Vec<EigenRecord>> {
    if !a.order().is_multiple_of(2) {
        return Err(Error::OddOrder(a.order()));
    }
    Ok(pareto_z_nonnegative(a, cfg))
}

/// Pareto Z records for any order. On the nonnegative orthant
/// `(x.x)^{(m-2)/2}` is unambiguous, so odd orders are computable here;
/// callers that use this must flag the result as interpretation-dependent.
pub fn pareto_z_nonnegative(a: &Tensor, cfg: &Config) -> Vec<EigenRecord> {
    pareto_records(a, &support_pairs(a, Family::Z, cfg), EigenKind::ParetoZ)
}

/// General real H- or Z-eigenpairs from signed random starts on the full
/// space (no sign restriction on the eigenvector).
pub fn real_eigenpairs(a: &Tensor, family: Family, cfg: &Config) -> Vec<EigenRecord> {
    let n = a.dim();
    let mut rng = rng::substream(cfg.seed, &[stream::EIGEN, 100 + family as u64]);
    let mut pairs: Vec<(f64, Vec<f64>)> = Vec::new();
    for _ in 0..cfg.eigen_starts().max(1) * 2 {
        let y: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let n2 = norm2(&y);
        if n2 == 0.0 {
            continue;
        }
        let mut z: Vec<f64> = y.iter().map(|v| v / n2).collect();
        let l0 = rayleigh(a, family, &z);
        z.push(if l0.is_finite() { l0 } else { 0.0 });
        let out = damped_newton(|z| eigen_system(a, family, z), &z, NEWTON);
        if !out.converged {
            continue;
        }
        let lambda = out.z[n];
        let mut x = out.z[..n].to_vec();
        // canonical sign: first nonzero entry positive, when the sign flip
        // preserves the eigenvalue
        let flips = family == Family::H || a.order().is_multiple_of(2);
        if flips {
            if let Some(first) = x.iter().find(|v| v.abs() > POSITIVE_FLOOR) {
                if *first < 0.0 {
                    x.iter_mut().for_each(|v| *v = -*v);
                }
            }
        }
        normalize(family, &mut x);
        if eigen_residual(a, family, lambda, &x) > RESIDUAL_TOL {
            continue;
        }
        let close = |v: &(f64, Vec<f64>)| {
            (v.0 - lambda).abs() <= CLUSTER_TOL * lambda.abs().max(1.0)
                && v.1.iter().zip(&x).all(|(p, q)| (p - q).abs() <= CLUSTER_TOL)
        };
        if !pairs.iter().any(close) {
            pairs.push((lambda, x));
        }
    }
    let kind = match family {
        Family::H => EigenKind::H,
        Family::Z => EigenKind::Z,
    };
    let mut out: Vec<EigenRecord> = pairs
        .into_iter()
        .map(|(value, x)| {
            let support = IndexSet::new((0..n).filter(|&i| x[i].abs() > POSITIVE_FLOOR).collect())
                .unwrap_or_else(|_| IndexSet::full(n));
            EigenRecord {
                kind,
                value,
                residual: eigen_residual(a, family, value, &x),
                vector: x,
                support,
                normalization: normalization_of(family),
            }
        })
        .collect();
    sort_records(&mut out);
    out
}

fn delta_from(sps: &[SupportPairs], a: &Tensor) -> Option<Delta> {
    let completeness = overall_completeness(a, sps);
    sps.iter()
        .flat_map(|sp| sp.pairs.iter().map(move |(v, y)| (sp, *v, y)))
        .min_by(|a, b| a.1.total_cmp(&b.1).then_with(|| a.0.support.cmp(&b.0.support)))
        .map(|(sp, value, y)| Delta { value, support: sp.support.clone(), vector: y.clone(), completeness })
}

/// δ_H+(A): smallest H+-eigenvalue over all principal sub-tensors.
pub fn delta_h_plus(a: &Tensor, cfg: &Config) -> Result<Delta> {
    delta_from(&support_pairs(a, Family::H, cfg), a)
        .ok_or_else(|| Error::NonConvergence("no H+-eigenvalue on any principal sub-tensor".into()))
}

/// δ_Z+(A): smallest Z+-eigenvalue over all principal sub-tensors; even
/// order only.
pub fn delta_z_plus(a: &Tensor, cfg: &Config) -> Result<Delta> {
    if !a.order().is_multiple_of(2) {
        return Err(Error::OddOrder(a.order()));
    }
    delta_from(&support_pairs(a, Family::Z, cfg), a)
        .ok_or_else(|| Error::NonConvergence("no Z+-eigenvalue on any principal sub-tensor".into()))
}

/// Distinct values of a record list (records are sorted by value).
pub fn distinct_values(records: &[EigenRecord]) -> Vec<f64> {
    let mut out: Vec<f64> = Vec::new();
    for r in records {
        if out.last().is_none_or(|v| (r.value - v).abs() > CLUSTER_TOL * v.abs().max(1.0)) {
            out.push(r.value);
        }
    }
    out
}

/// Records of one kind plus the summary quantities derivable from the same
/// support enumeration.
pub fn spectrum(a: &Tensor, kind: EigenKind, cfg: &Config) -> Result<SpectrumSummary> {
    let even = a.order().is_multiple_of(2);
    if kind == EigenKind::ParetoZ && !even {
        return Err(Error::OddOrder(a.order()));
    }
    let h = support_pairs(a, Family::H, cfg);
    let z = support_pairs(a, Family::Z, cfg);
    let records = match kind {
        EigenKind::H => real_eigenpairs(a, Family::H, cfg),
        EigenKind::Z => real_eigenpairs(a, Family::Z, cfg),
        EigenKind::HPlus => plus_records(a, &h, kind),
        EigenKind::ZPlus => plus_records(a, &z, kind),
        EigenKind::HPlusplus => plusplus_records(a, &h, kind),
        EigenKind::ZPlusplus => plusplus_records(a, &z, kind),
        EigenKind::ParetoH => pareto_records(a, &h, kind),
        EigenKind::ParetoZ => pareto_records(a, &z, kind),
    };
    let pareto_h = pareto_records(a, &h, EigenKind::ParetoH);
    let pareto_z = even.then(|| pareto_records(a, &z, EigenKind::ParetoZ));
    let completeness = match kind {
        EigenKind::H | EigenKind::Z => Completeness::Heuristic,
        k if k.family() == Family::H => overall_completeness(a, &h),
        _ => overall_completeness(a, &z),
    };
    Ok(SpectrumSummary {
        kind,
        values: distinct_values(&records),
        records,
        delta_h_plus: delta_from(&h, a).map(|d| d.value),
        delta_z_plus: if even { delta_from(&z, a).map(|d| d.value) } else { None },
        lambda_min_pareto_h: pareto_h.first().map(|r| r.value),
        mu_min_pareto_z: pareto_z.and_then(|r| r.first().map(|r| r.value)),
        completeness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::unit_tensor;

    fn cfg() -> Config {
        Config::default()
    }

    fn values(records: &[EigenRecord]) -> Vec<f64> {
        distinct_values(records)
    }

    #[test]
    fn h_plus_of_unit_tensor() {
        let recs = h_plus_eigenpairs(&unit_tensor(3, 2).unwrap(), &cfg());
        assert!(recs.iter().all(|r| (r.value - 1.0).abs() < 1e-10));
        let vecs: Vec<&Vec<f64>> = recs.iter().map(|r| &r.vector).collect();
        assert!(vecs.contains(&&vec![1.0, 0.0]));
        assert!(vecs.contains(&&vec![0.0, 1.0]));
        assert!(recs.iter().any(|r| r.vector.iter().all(|v| (v - 1.0).abs() < 1e-12)));
    }

    #[test]
    fn h_plus_of_diagonal_matrix() {
        let d = Tensor::diagonal(2, &[2.0, 5.0]).unwrap();
        let recs = h_plus_eigenpairs(&d, &cfg());
        assert_eq!(values(&recs), vec![2.0, 5.0]);
        assert_eq!(recs[0].vector, vec![1.0, 0.0]);
        assert_eq!(recs[1].vector, vec![0.0, 1.0]);
    }

    #[test]
    fn diagonal_order_four_recovers_each_entry() {
        let d = Tensor::diagonal(4, &[3.0, 0.5, 2.0]).unwrap();
        let recs = h_plus_eigenpairs(&d, &cfg());
        for (i, di) in [3.0, 0.5, 2.0].into_iter().enumerate() {
            assert!(recs.iter().any(|r| r.value == di && r.vector[i] == 1.0 && r.support.len() == 1));
        }
    }

    #[test]
    fn z_plus_of_unit_tensor() {
        let recs = z_plus_eigenpairs(&unit_tensor(4, 2).unwrap(), &cfg());
        let full: Vec<_> = recs.iter().filter(|r| r.support.len() == 2).collect();
        assert_eq!(full.len(), 1);
        assert!((full[0].value - 0.5).abs() < 1e-12);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!(full[0].vector.iter().all(|v| (v - h).abs() < 1e-12));
        assert!(recs.iter().filter(|r| r.support.len() == 1).all(|r| r.value == 1.0));
    }

    #[test]
    fn pareto_h_of_unit_and_diagonal() {
        let recs = pareto_h_eigenvalues(&unit_tensor(3, 3).unwrap(), &cfg());
        assert_eq!(values(&recs).len(), 1);
        assert!((values(&recs)[0] - 1.0).abs() < 1e-10);

        let d = Tensor::diagonal(2, &[1.0, 2.0]).unwrap();
        let recs = pareto_h_eigenvalues(&d, &cfg());
        assert_eq!(values(&recs), vec![1.0, 2.0]);
        assert!(recs.iter().all(|r| r.support.len() == 1));
    }

    #[test]
    fn pareto_z_of_unit_tensor() {
        let recs = pareto_z_eigenvalues(&unit_tensor(4, 2).unwrap(), &cfg()).unwrap();
        let v = values(&recs);
        assert_eq!(v.len(), 2);
        assert!((v[0] - 0.5).abs() < 1e-8 && (v[1] - 1.0).abs() < 1e-8);
        let recs = pareto_z_eigenvalues(&unit_tensor(2, 3).unwrap(), &cfg()).unwrap();
        assert_eq!(values(&recs).len(), 1);
        assert!(pareto_z_eigenvalues(&unit_tensor(3, 2).unwrap(), &cfg()).is_err());
    }

    #[test]
    fn deltas() {
        let i = unit_tensor(4, 2).unwrap();
        assert!((delta_h_plus(&i, &cfg()).unwrap().value - 1.0).abs() < 1e-10);
        assert!((delta_z_plus(&i, &cfg()).unwrap().value - 0.5).abs() < 1e-10);
        let d = Tensor::diagonal(4, &[2.0, 5.0]).unwrap();
        assert_eq!(delta_h_plus(&d, &cfg()).unwrap().value, 2.0);
        assert!(delta_z_plus(&unit_tensor(3, 2).unwrap(), &cfg()).is_err());
    }

    #[test]
    fn completeness_flags() {
        let s = spectrum(&Tensor::diagonal(2, &[1.0, 2.0]).unwrap(), EigenKind::ParetoH, &cfg()).unwrap();
        assert_eq!(s.completeness, Completeness::ClosedForm);
        let s = spectrum(&unit_tensor(3, 2).unwrap(), EigenKind::HPlus, &cfg()).unwrap();
        assert_eq!(s.completeness, Completeness::Heuristic);
        let s = spectrum(&unit_tensor(4, 1).unwrap(), EigenKind::ZPlus, &cfg()).unwrap();
        assert_eq!(s.completeness, Completeness::ClosedForm);
    }

    #[test]
    fn real_h_eigenpairs_of_signed_matrix() {
        let a = Tensor::from_matrix(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let recs = real_eigenpairs(&a, Family::H, &cfg());
        let v = values(&recs);
        assert_eq!(v.len(), 2);
        assert!((v[0] - 1.0).abs() < 1e-10 && (v[1] - 3.0).abs() < 1e-10);
    }

    #[test]
    fn kind_parsing() {
        assert_eq!("pareto_z".parse::<EigenKind>().unwrap(), EigenKind::ParetoZ);
        assert_eq!("H+".parse::<EigenKind>().unwrap(), EigenKind::HPlus);
        assert!("q".parse::<EigenKind>().is_err());
    }
}
