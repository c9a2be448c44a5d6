//! Closed-form lower and upper bounds on the norms of TCP solutions, and a
//! harness that checks them against solver output.
//!
//! Every bound has the shape `||(-q)_+||_a / D` and is compared with
//! `||x||_b^{m-1}`. Identifiers:
//!
//! | id | norm | lower denominator | upper divisor | needs |
//! |----|------|-------------------|---------------|-------|
//! | `inf_general` | inf | `n^{(m-2)/2} max row` | β | |
//! | `inf_even` | inf | `max row` | β | m even |
//! | `two_symmetric` | 2 | `n^{(m-2)/2} (sum row^2)^{1/2}` | μ | symmetric |
//! | `m_symmetric_even` | m | `(sum row^{m/(m-1)})^{(m-1)/m}` | λ (q in the m/(m-1) norm) | symmetric, m even |
//! | `lcp_inf`, `lcp_two` | inf, 2 | as above at m = 2 | β, λ | m = 2 (`lcp_two` symmetric) |
//! | `copositive_*` | | the four rows above | | symmetric, strictly copositive |
//!
//! with `row_i = sum |a_{i i2...im}|`. The `m_symmetric_even` entry also
//! carries the denominator with exponent `1/m` as `printed_lower_bound`;
//! that variant is not a valid bound (it fails for `c I`, `c > 1`) and is
//! never gated.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::eigen::{self, Completeness};
use crate::error::{Error, Result};
use crate::generate::{generate, GeneratorSpec};
use crate::norms::{estimate_norm, Operator};
use crate::rng::{self, stream};
use crate::spositivity::{classify, is_copositive, minimize_on_faces, Certification, Verdict};
use crate::tcp::{solve_enumeration, solve_iterative, TcpInstance};
use crate::vector::{norm, pos_part, NormP};

/// Slack on every sandwich comparison.
pub const SANDWICH_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundId {
    InfGeneral,
    InfEven,
    TwoSymmetric,
    MSymmetricEven,
    LcpInf,
    LcpTwo,
    CopositiveInfGeneral,
    CopositiveInfEven,
    CopositiveTwo,
    CopositiveMEven,
}

impl BoundId {
    pub fn as_str(self) -> &'static str {
        match self {
            BoundId::InfGeneral => "inf_general",
            BoundId::InfEven => "inf_even",
            BoundId::TwoSymmetric => "two_symmetric",
            BoundId::MSymmetricEven => "m_symmetric_even",
            BoundId::LcpInf => "lcp_inf",
            BoundId::LcpTwo => "lcp_two",
            BoundId::CopositiveInfGeneral => "copositive_inf_general",
            BoundId::CopositiveInfEven => "copositive_inf_even",
            BoundId::CopositiveTwo => "copositive_two",
            BoundId::CopositiveMEven => "copositive_m_even",
        }
    }
}

/// Which solution norm a bound controls.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolutionNorm {
    Inf,
    Two,
    M,
}

impl SolutionNorm {
    fn exponent(self, m: usize) -> NormP {
        match self {
            SolutionNorm::Inf => NormP::Inf,
            SolutionNorm::Two => NormP::P(2.0),
            SolutionNorm::M => NormP::P(m as f64),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UpperBound {
    pub norm: SolutionNorm,
    pub value: Option<f64>,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LowerBound {
    pub id: BoundId,
    pub norm: SolutionNorm,
    pub value: f64,
    pub applicable: bool,
    pub reason: String,
    pub interpretation_dependent: bool,
    pub printed_value: Option<f64>,
}

/// Estimates of the divisors and where they came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Quantities {
    pub verdict: Verdict,
    pub beta: f64,
    pub beta_certified_by: Certification,
    pub lambda: Option<f64>,
    pub lambda_completeness: Option<Completeness>,
    pub mu: Option<f64>,
    pub mu_completeness: Option<Completeness>,
    pub strictly_copositive: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundEntry {
    pub id: BoundId,
    /// Index into the report's solution list.
    pub solution: usize,
    pub norm: SolutionNorm,
    pub lower_bound: Option<f64>,
    pub upper_bound: Option<f64>,
    /// `||x||^{m-1}` in the entry's norm.
    pub achieved: f64,
    pub applicable: bool,
    pub reason: String,
    pub interpretation_dependent: bool,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub printed_lower_bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub empirical_lower_bound: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub instance_id: u64,
    pub m: usize,
    pub n: usize,
    pub symmetric: bool,
    pub quantities: Quantities,
    pub solutions: Vec<Vec<f64>>,
    pub entries: Vec<BoundEntry>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub instance: TcpInstance,
    pub report: BoundsReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HarnessOutput {
    pub reports: Vec<BoundsReport>,
    pub violations: Vec<Counterexample>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct HarnessOptions {
    /// Also compute lower bounds from estimated operator norms (slow).
    pub empirical: bool,
}

fn q_norm(q: &[f64], p: NormP) -> f64 {
    let neg: Vec<f64> = q.iter().map(|v| -v).collect();
    norm(&pos_part(&neg), p)
}

fn divide(num: f64, name: &'static str, d: f64) -> Result<f64> {
    if d > 0.0 {
        Ok(num / d)
    } else {
        Err(Error::NonpositiveDivisor { name, value: d })
    }
}

/// Upper bounds from β, μ and λ. μ and λ apply only to symmetric tensors
/// and are skipped when absent.
pub fn upper_bounds(inst: &TcpInstance, beta: f64, lambda: Option<f64>, mu: Option<f64>) -> Result<Vec<UpperBound>> {
    let m = inst.tensor.order() as f64;
    let q = &inst.q;
    let sym = inst.tensor.is_symmetric();
    let mut out = vec![UpperBound {
        norm: SolutionNorm::Inf,
        value: Some(divide(q_norm(q, NormP::Inf), "beta", beta)?),
        reason: String::new(),
    }];
    for (norm, qp, name, d) in
        [(SolutionNorm::Two, NormP::P(2.0), "mu", mu), (SolutionNorm::M, NormP::P(m / (m - 1.0)), "lambda", lambda)]
    {
        let (value, reason) = match (sym, d) {
            (false, _) => (None, "tensor is not symmetric".to_string()),
            (true, None) => (None, format!("{name} unavailable")),
            (true, Some(d)) => (Some(divide(q_norm(q, qp), name, d)?), String::new()),
        };
        out.push(UpperBound { norm, value, reason });
    }
    Ok(out)
}

/// Closed-form lower bounds from absolute row sums.
pub fn lower_bounds(inst: &TcpInstance) -> Vec<LowerBound> {
    let a = &inst.tensor;
    let (m, n) = (a.order(), a.dim());
    let mf = m as f64;
    let even = m % 2 == 0;
    let sym = a.is_symmetric();
    let rows = a.abs_row_sums();
    let max_row = rows.iter().cloned().fold(0.0, f64::max);
    let dim_factor = (n as f64).powf((mf - 2.0) / 2.0);
    let q = &inst.q;
    let q_inf = q_norm(q, NormP::Inf);
    let ratio = |num: f64, den: f64| if num == 0.0 { 0.0 } else { num / den };

    let sum_pow = rows.iter().map(|r| r.powf(mf / (mf - 1.0))).sum::<f64>();
    let q_m = q_norm(q, NormP::P(mf));

    let yes = |ok: bool, why: &str| (ok, if ok { String::new() } else { why.to_string() });
    let (even_ok, even_why) = yes(even, "m is odd");
    let (sym_ok, sym_why) = yes(sym, "tensor is not symmetric");
    let (se_ok, se_why) = yes(sym && even, if sym { "m is odd" } else { "tensor is not symmetric" });

    vec![
        LowerBound {
            id: BoundId::InfGeneral,
            norm: SolutionNorm::Inf,
            value: ratio(q_inf, dim_factor * max_row),
            applicable: true,
            reason: String::new(),
            interpretation_dependent: false,
            printed_value: None,
        },
        LowerBound {
            id: BoundId::InfEven,
            norm: SolutionNorm::Inf,
            value: ratio(q_inf, max_row),
            applicable: even_ok,
            reason: even_why,
            interpretation_dependent: false,
            printed_value: None,
        },
        LowerBound {
            id: BoundId::TwoSymmetric,
            norm: SolutionNorm::Two,
            value: ratio(q_norm(q, NormP::P(2.0)), dim_factor * rows.iter().map(|r| r * r).sum::<f64>().sqrt()),
            applicable: sym_ok,
            reason: sym_why,
            interpretation_dependent: !even,
            printed_value: None,
        },
        LowerBound {
            id: BoundId::MSymmetricEven,
            norm: SolutionNorm::M,
            value: ratio(q_m, sum_pow.powf((mf - 1.0) / mf)),
            applicable: se_ok,
            reason: se_why,
            interpretation_dependent: false,
            printed_value: Some(ratio(q_m, sum_pow.powf(1.0 / mf))),
        },
    ]
}

/// Minimum of `A x^m / ||x||_p^m` over the nonnegative orthant, by the face
/// search used for β.
fn direct_orthant_min(inst: &TcpInstance, p: NormP, cfg: &Config, tag: u64) -> f64 {
    let a = &inst.tensor;
    let m = a.order() as i32;
    let f = |x: &[f64]| {
        let y = a.contract_m1_unchecked(x);
        x.iter().zip(&y).map(|(u, v)| u * v).sum::<f64>() / norm(x, p).powi(m)
    };
    minimize_on_faces(a.dim(), f, cfg, &[stream::PARETO_MIN, tag]).value
}

/// β, and for symmetric tensors λ and μ. On a symmetric tensor the smallest
/// Pareto H (Z) eigenvalue is the minimum of `A x^m` over the nonnegative
/// part of the m-norm (2-norm) unit sphere, so the eigen enumeration is
/// cross-checked against a direct minimization and the smaller is used.
pub fn quantities(inst: &TcpInstance, cfg: &Config) -> Quantities {
    let a = &inst.tensor;
    let c = classify(a, cfg);
    let mut q = Quantities {
        verdict: c.verdict,
        beta: c.beta.value,
        beta_certified_by: c.beta.certified_by,
        lambda: None,
        lambda_completeness: None,
        mu: None,
        mu_completeness: None,
        strictly_copositive: None,
    };
    if !a.is_symmetric() {
        return q;
    }
    let m = a.order();
    let cop = is_copositive(a, true, cfg).expect("symmetric");
    q.strictly_copositive = Some(cop.copositive);

    let pick = |records: Vec<eigen::EigenRecord>, sps_complete: Completeness, direct: f64| {
        let enumerated = records.first().map(|r| r.value);
        match enumerated {
            Some(e) if e <= direct + 1e-9 => (e, sps_complete),
            _ => (direct, Completeness::Heuristic),
        }
    };
    let h = eigen::support_pairs(a, eigen::Family::H, cfg);
    let h_complete = fold_completeness(a, &h);
    let (lambda, lc) = pick(
        eigen::pareto_records_from(a, &h, eigen::EigenKind::ParetoH),
        h_complete,
        direct_orthant_min(inst, NormP::P(m as f64), cfg, 0),
    );
    let z = eigen::support_pairs(a, eigen::Family::Z, cfg);
    let z_complete = fold_completeness(a, &z);
    let (mu, mc) = pick(
        eigen::pareto_records_from(a, &z, eigen::EigenKind::ParetoZ),
        z_complete,
        direct_orthant_min(inst, NormP::P(2.0), cfg, 1),
    );
    q.lambda = Some(lambda);
    q.lambda_completeness = Some(lc);
    q.mu = Some(mu);
    q.mu_completeness = Some(mc);
    q
}

fn fold_completeness(a: &crate::Tensor, sps: &[eigen::SupportPairs]) -> Completeness {
    if a.dim() == 1 || sps.iter().all(|s| s.completeness == Completeness::ClosedForm) {
        Completeness::ClosedForm
    } else {
        Completeness::Heuristic
    }
}

/// Lower bounds from estimated operator norms. The estimates are below the
/// true norms, so these values may exceed the certified lower bounds and are
/// never gated.
fn empirical_lower(inst: &TcpInstance, norm_kind: SolutionNorm, id: BoundId, cfg: &Config) -> Option<f64> {
    let a = &inst.tensor;
    let m = a.order();
    let mf = m as f64;
    let q = &inst.q;
    let n = a.dim() as f64;
    let est = |op, p| estimate_norm(a, op, p, cfg).ok().map(|r| r.empirical_norm);
    let v = match (id, norm_kind) {
        (BoundId::InfGeneral | BoundId::LcpInf, _) => {
            q_norm(q, NormP::Inf) / (n.powf((mf - 2.0) / 2.0) * est(Operator::T, NormP::Inf)?)
        }
        (BoundId::InfEven, _) => q_norm(q, NormP::Inf) / est(Operator::F, NormP::Inf)?.powi(m as i32 - 1),
        (BoundId::TwoSymmetric | BoundId::LcpTwo, _) => q_norm(q, NormP::P(2.0)) / est(Operator::T, NormP::P(2.0))?,
        (BoundId::MSymmetricEven, _) => q_norm(q, NormP::P(mf)) / est(Operator::F, NormP::P(mf))?.powi(m as i32 - 1),
        _ => return None,
    };
    Some(if v.is_finite() { v } else { 0.0 })
}

/// The bound table of an instance: ids, lower and upper values and
/// applicability, before any solution is plugged in.
#[derive(Debug, Clone)]
struct Row {
    id: BoundId,
    norm: SolutionNorm,
    lower: Option<f64>,
    upper: Option<f64>,
    applicable: bool,
    reason: String,
    interpretation_dependent: bool,
    printed: Option<f64>,
    empirical: Option<f64>,
}

fn table(inst: &TcpInstance, qs: &Quantities, cfg: &Config, opts: HarnessOptions) -> Result<Vec<Row>> {
    let m = inst.tensor.order();
    let strict = qs.verdict == Verdict::StrictlySemiPositive;
    let uppers = if strict { upper_bounds(inst, qs.beta, qs.lambda, qs.mu)? } else { Vec::new() };
    let upper_for = |norm: SolutionNorm| uppers.iter().find(|u| u.norm == norm).and_then(|u| u.value);

    let mut rows: Vec<Row> = Vec::new();
    for lb in lower_bounds(inst) {
        let mut applicable = lb.applicable && strict;
        let mut reason = lb.reason.clone();
        if !strict {
            reason = format!("tensor is {}", qs.verdict.as_str());
        }
        let upper = upper_for(lb.norm);
        if applicable && lb.norm != SolutionNorm::Inf && upper.is_none() {
            applicable = false;
            reason = "upper divisor unavailable".into();
        }
        rows.push(Row {
            id: lb.id,
            norm: lb.norm,
            lower: Some(lb.value),
            upper,
            applicable,
            reason,
            interpretation_dependent: lb.interpretation_dependent,
            printed: lb.printed_value,
            empirical: if opts.empirical && lb.applicable { empirical_lower(inst, lb.norm, lb.id, cfg) } else { None },
        });
    }

    let base = rows.clone();
    if m == 2 {
        for (id, from) in [(BoundId::LcpInf, BoundId::InfGeneral), (BoundId::LcpTwo, BoundId::TwoSymmetric)] {
            let src = base.iter().find(|r| r.id == from).expect("row present");
            rows.push(Row { id, ..src.clone() });
        }
    }
    let cop = qs.strictly_copositive;
    for (id, from) in [
        (BoundId::CopositiveInfGeneral, BoundId::InfGeneral),
        (BoundId::CopositiveInfEven, BoundId::InfEven),
        (BoundId::CopositiveTwo, BoundId::TwoSymmetric),
        (BoundId::CopositiveMEven, BoundId::MSymmetricEven),
    ] {
        let src = base.iter().find(|r| r.id == from).expect("row present");
        let mut row = Row { id, ..src.clone() };
        match cop {
            Some(true) => {}
            Some(false) => {
                row.applicable = false;
                row.reason = "tensor is not strictly copositive".into();
            }
            None => {
                row.applicable = false;
                row.reason = "tensor is not symmetric".into();
            }
        }
        rows.push(row);
    }
    Ok(rows)
}

fn sandwich(lower: Option<f64>, achieved: f64, upper: Option<f64>) -> bool {
    lower.is_none_or(|l| l - SANDWICH_TOL <= achieved) && upper.is_none_or(|u| achieved <= u + SANDWICH_TOL)
}

/// Bound report for one instance: classifies, computes the divisors, solves
/// (enumeration when within the cap, iterative otherwise or when
/// enumeration finds nothing) and checks every applicable entry against
/// every solution.
pub fn evaluate_instance(
    inst: &TcpInstance,
    instance_id: u64,
    cfg: &Config,
    opts: HarnessOptions,
) -> Result<BoundsReport> {
    let a = &inst.tensor;
    let m = a.order();
    let qs = quantities(inst, cfg);
    let rows = table(inst, &qs, cfg, opts)?;

    let mut solutions: Vec<Vec<f64>> = match solve_enumeration(inst, cfg) {
        Ok(s) => s.into_iter().map(|s| s.x).collect(),
        Err(Error::DimensionCap { .. }) => Vec::new(),
        Err(e) => return Err(e),
    };
    if solutions.is_empty() {
        if let Ok(s) = solve_iterative(inst, cfg) {
            solutions.push(s.x);
        }
    }

    let mut entries = Vec::new();
    for (k, x) in solutions.iter().enumerate() {
        for row in &rows {
            let achieved = norm(x, row.norm.exponent(m)).powi(m as i32 - 1);
            let pass = !row.applicable || sandwich(row.lower, achieved, row.upper);
            entries.push(BoundEntry {
                id: row.id,
                solution: k,
                norm: row.norm,
                lower_bound: row.lower,
                upper_bound: row.upper,
                achieved,
                applicable: row.applicable,
                reason: row.reason.clone(),
                interpretation_dependent: row.interpretation_dependent,
                pass,
                printed_lower_bound: row.printed,
                empirical_lower_bound: row.empirical,
            });
        }
    }
    let strict = qs.verdict == Verdict::StrictlySemiPositive;
    let (pass, note) = if solutions.is_empty() && strict {
        (false, Some("no certified solution found for a strictly semi-positive tensor".to_string()))
    } else {
        (entries.iter().all(|e| e.pass), None)
    };
    Ok(BoundsReport {
        instance_id,
        m,
        n: a.dim(),
        symmetric: a.is_symmetric(),
        quantities: qs,
        solutions,
        entries,
        pass,
        note,
    })
}

/// The `k`-th harness instance of a spec: tensor from the generator with a
/// derived seed, `q` uniform in `[-1, 1]^n` times a log-uniform scale in
/// `[0.1, 10]`; every fifth instance has `q >= 0`.
pub fn harness_instance(spec: &GeneratorSpec, k: u64, cfg: &Config) -> Result<TcpInstance> {
    let seed = rng::derive_seed(spec.seed, &[k]);
    let g = generate(&GeneratorSpec { seed, ..spec.clone() }, cfg)?;
    let mut r = rng::substream(seed, &[stream::BOUNDS_Q]);
    let scale = 10f64.powf(r.gen_range(-1.0..1.0));
    let mut q: Vec<f64> = (0..spec.n).map(|_| scale * r.gen_range(-1.0..1.0)).collect();
    if k % 5 == 4 {
        q.iter_mut().for_each(|v| *v = v.abs());
    }
    TcpInstance::new(g.tensor, q)
}

/// Generates `count` instances and checks every applicable bound on every
/// certified solution. Reports are in generation order.
pub fn verify_bounds(spec: &GeneratorSpec, count: usize, cfg: &Config, opts: HarnessOptions) -> Result<HarnessOutput> {
    let results: Vec<Result<(TcpInstance, BoundsReport)>> = (0..count as u64)
        .into_par_iter()
        .map(|k| {
            let inst = harness_instance(spec, k, cfg)?;
            let report = evaluate_instance(&inst, k, cfg, opts)?;
            Ok((inst, report))
        })
        .collect();
    let mut out = HarnessOutput { reports: Vec::with_capacity(count), violations: Vec::new() };
    for r in results {
        let (instance, report) = r?;
        if !report.pass {
            out.violations.push(Counterexample { instance, report: report.clone() });
        }
        out.reports.push(report);
    }
    Ok(out)
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

/// One JSON object per report, newline-terminated.
pub fn to_jsonl(reports: &[BoundsReport]) -> String {
    let mut s = String::new();
    for r in reports {
        s.push_str(&serde_json::to_string(r).expect("reports serialize"));
        s.push('\n');
    }
    s
}

pub const CSV_HEADER: &str = "instance_id,solution,bound_id,applicable,lower,achieved,upper,pass";

/// Summary rows for every entry.
pub fn to_csv(reports: &[BoundsReport]) -> String {
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    for r in reports {
        for e in &r.entries {
            s.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                r.instance_id,
                e.solution,
                e.id.as_str(),
                e.applicable,
                fmt_opt(e.lower_bound),
                e.achieved,
                fmt_opt(e.upper_bound),
                e.pass
            ));
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{Family, GeneratorParams};
    use crate::tensor::{unit_tensor, Tensor};

    fn inst(a: Tensor, q: &[f64]) -> TcpInstance {
        TcpInstance::new(a, q.to_vec()).unwrap()
    }

    fn entry(r: &BoundsReport, id: BoundId) -> &BoundEntry {
        r.entries.iter().find(|e| e.id == id && e.solution == 0).unwrap()
    }

    #[test]
    fn identity_cubic_example() {
        let p = inst(unit_tensor(3, 2).unwrap(), &[-8.0, 1.0]);
        let r = evaluate_instance(&p, 0, &Config::default(), HarnessOptions::default()).unwrap();
        assert!(r.pass);
        let e = entry(&r, BoundId::InfGeneral);
        assert!((e.upper_bound.unwrap() - 8.0).abs() < 1e-9);
        assert!((e.achieved - 8.0).abs() < 1e-9);
        assert!((e.lower_bound.unwrap() - 8.0 / 2f64.sqrt()).abs() < 1e-12);
        assert!(!entry(&r, BoundId::InfEven).applicable);
        assert!(entry(&r, BoundId::TwoSymmetric).interpretation_dependent);
    }

    #[test]
    fn identity_quartic_two_norm_is_tight() {
        let p = inst(unit_tensor(4, 2).unwrap(), &[-1.0, -1.0]);
        let r = evaluate_instance(&p, 0, &Config::default(), HarnessOptions::default()).unwrap();
        assert!(r.pass);
        assert!((r.quantities.mu.unwrap() - 0.5).abs() < 1e-8);
        let e = entry(&r, BoundId::TwoSymmetric);
        assert!((e.upper_bound.unwrap() - 2.0 * 2f64.sqrt()).abs() < 1e-6);
        assert!((e.achieved - 2f64.sqrt().powi(3)).abs() < 1e-9);
    }

    #[test]
    fn identity_quartic_inf_even_is_tight() {
        let p = inst(unit_tensor(4, 2).unwrap(), &[-1.0, 0.0]);
        let r = evaluate_instance(&p, 0, &Config::default(), HarnessOptions::default()).unwrap();
        let e = entry(&r, BoundId::InfEven);
        assert!(e.applicable);
        assert_eq!(e.lower_bound, Some(1.0));
        assert!((e.achieved - 1.0).abs() < 1e-12);
    }

    #[test]
    fn identity_matrix_pinches() {
        let p = inst(unit_tensor(2, 2).unwrap(), &[-1.0, 2.0]);
        let r = evaluate_instance(&p, 0, &Config::default(), HarnessOptions::default()).unwrap();
        let e = entry(&r, BoundId::LcpInf);
        assert!(e.applicable && e.pass);
        assert_eq!(e.lower_bound, Some(1.0));
        assert!((e.upper_bound.unwrap() - 1.0).abs() < 1e-9);
        assert_eq!(e.achieved, 1.0);
    }

    #[test]
    fn nonnegative_q_gives_zero_bounds() {
        let p = inst(unit_tensor(3, 3).unwrap(), &[0.0, 1.0, 2.0]);
        let r = evaluate_instance(&p, 0, &Config::default(), HarnessOptions::default()).unwrap();
        assert!(r.pass);
        for e in &r.entries {
            assert_eq!(e.achieved, 0.0);
            assert!(e.lower_bound.unwrap_or(0.0) == 0.0 && e.upper_bound.unwrap_or(0.0) == 0.0);
        }
    }

    #[test]
    fn printed_m_norm_denominator_fails_on_scaled_identity() {
        // 8 x^3 = 1 gives ||x||_4^3 = 1/8
        let p = inst(unit_tensor(4, 1).unwrap().scale(8.0), &[-1.0]);
        let r = evaluate_instance(&p, 0, &Config::default(), HarnessOptions::default()).unwrap();
        let e = entry(&r, BoundId::MSymmetricEven);
        assert!((e.achieved - 0.125).abs() < 1e-12);
        assert!((e.lower_bound.unwrap() - 0.125).abs() < 1e-12);
        assert!((e.printed_lower_bound.unwrap() - 0.5).abs() < 1e-12);
        assert!(e.pass);
    }

    #[test]
    fn upper_bounds_reject_nonpositive_divisors() {
        let p = inst(unit_tensor(3, 2).unwrap(), &[-1.0, 0.0]);
        assert!(matches!(upper_bounds(&p, 0.0, None, None), Err(Error::NonpositiveDivisor { name: "beta", .. })));
        let u = upper_bounds(&p, 1.0, Some(1.0), Some(2f64.powf(-0.5))).unwrap();
        assert_eq!(u[0].value, Some(1.0));
    }

    #[test]
    fn non_strict_tensor_is_not_applicable() {
        let a = Tensor::from_matrix(&[vec![1.0, 0.0], vec![0.0, -1.0]]).unwrap();
        let r = evaluate_instance(&inst(a, &[-1.0, -1.0]), 0, &Config::default(), HarnessOptions::default()).unwrap();
        assert!(r.entries.iter().all(|e| !e.applicable));
    }

    #[test]
    fn harness_small_run_and_outputs() {
        let spec =
            GeneratorSpec { family: Family::DiagDominant, m: 3, n: 2, seed: 1, params: GeneratorParams::default() };
        let out = verify_bounds(&spec, 5, &Config::default(), HarnessOptions::default()).unwrap();
        assert_eq!(out.reports.len(), 5);
        assert!(out.violations.is_empty());
        let jsonl = to_jsonl(&out.reports);
        assert_eq!(jsonl.lines().count(), 5);
        let back: BoundsReport = serde_json::from_str(jsonl.lines().next().unwrap()).unwrap();
        assert_eq!(back, out.reports[0]);
        assert!(to_csv(&out.reports).starts_with(CSV_HEADER));
    }

    #[test]
    fn empirical_variants_are_reported() {
        let p = inst(unit_tensor(4, 2).unwrap(), &[-1.0, -0.5]);
        let r = evaluate_instance(&p, 0, &Config::default(), HarnessOptions { empirical: true }).unwrap();
        let e = entry(&r, BoundId::InfGeneral);
        assert!(e.empirical_lower_bound.is_some());
    }
}
