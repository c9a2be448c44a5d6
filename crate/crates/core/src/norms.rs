//! Positively homogeneous operators built from a tensor and their operator
//! norms.
//!
//! * `T_A(x) = ||x||_2^{2-m} A x^{m-1}` (and `T_A(0) = 0`)
//! * `F_A(x) = (A x^{m-1})^{[1/(m-1)]}` for even `m`
//!
//! [`norm_bound`] gives closed-form row-sum upper bounds on `||T_A||_p`,
//! `||F_A||_p`; [`estimate_norm`] produces a lower estimate by multistart
//! ascent over the unit sphere.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::error::{Error, Result};
use crate::rng::{self, stream};
use crate::solve::pattern_search;
use crate::tensor::Tensor;
use crate::vector::{lex_cmp, norm, norm2, odd_root, NormP};

const STEP_FLOOR: f64 = 1e-9;
const MAX_EVALS: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Operator {
    T,
    F,
}

impl std::str::FromStr for Operator {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "T" | "t" => Ok(Operator::T),
            "F" | "f" => Ok(Operator::F),
            other => Err(Error::Parse(format!("unknown operator {other:?} (expected T or F)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormReport {
    pub op: Operator,
    pub p: NormP,
    /// Lower estimate of the operator norm.
    pub empirical_norm: f64,
    pub closed_form_bound: f64,
    /// Unit vector (in the p-norm) attaining `empirical_norm`.
    pub witness: Vec<f64>,
}

pub fn apply_t(a: &Tensor, x: &[f64]) -> Result<Vec<f64>> {
    let y = a.contract_m1(x)?;
    let r = norm2(x);
    if r == 0.0 {
        return Ok(vec![0.0; x.len()]);
    }
    let s = r.powi(2 - a.order() as i32);
    Ok(y.into_iter().map(|v| v * s).collect())
}

pub fn apply_f(a: &Tensor, x: &[f64]) -> Result<Vec<f64>> {
    let m = a.order();
    if !m.is_multiple_of(2) {
        return Err(Error::OddOrder(m));
    }
    let y = a.contract_m1(x)?;
    Ok(y.into_iter().map(|v| odd_root(v, m - 1)).collect())
}

pub fn apply(a: &Tensor, op: Operator, x: &[f64]) -> Result<Vec<f64>> {
    match op {
        Operator::T => apply_t(a, x),
        Operator::F => apply_f(a, x),
    }
}

/// Closed-form upper bound on the operator norm from the absolute row sums
/// `row_i = sum |a_{i i2...im}|`:
///
/// | op | p = inf | finite p |
/// |----|---------|----------|
/// | T  | `max row_i` | `n^{(m-2)/p} (sum row_i^p)^{1/p}` |
/// | F  | `max row_i^{1/(m-1)}` | `(sum row_i^{p/(m-1)})^{1/p}` |
pub fn norm_bound(a: &Tensor, op: Operator, p: NormP) -> Result<f64> {
    let p = p.validate()?;
    let m = a.order();
    if op == Operator::F && !m.is_multiple_of(2) {
        return Err(Error::OddOrder(m));
    }
    let rows = a.abs_row_sums();
    let max_row = rows.iter().cloned().fold(0.0, f64::max);
    let n = a.dim() as f64;
    let e = 1.0 / (m as f64 - 1.0);
    Ok(match (op, p) {
        (Operator::T, NormP::Inf) => max_row,
        (Operator::F, NormP::Inf) => max_row.powf(e),
        (Operator::T, NormP::P(p)) => {
            n.powf((m as f64 - 2.0) / p) * rows.iter().map(|r| r.powf(p)).sum::<f64>().powf(1.0 / p)
        }
        (Operator::F, NormP::P(p)) => rows.iter().map(|r| r.powf(p * e)).sum::<f64>().powf(1.0 / p),
    })
}

/// Lower estimate of `max_{||x||_p = 1} ||op(x)||_p`.
///
/// Ascent runs on the scale-free ratio `||op(x)||_p / ||x||_p` inside the
/// box `[-1, 1]^n`, from every `±e_i` and `cfg.norm_starts()` random points.
/// Ties between starts go to the lexicographically largest witness.
pub fn estimate_norm(a: &Tensor, op: Operator, p: NormP, cfg: &Config) -> Result<NormReport> {
    let bound = norm_bound(a, op, p)?;
    let n = a.dim();
    let ratio = |x: &[f64]| -> f64 {
        let d = norm(x, p);
        if d == 0.0 {
            return 0.0;
        }
        match apply(a, op, x) {
            Ok(y) => norm(&y, p) / d,
            Err(_) => 0.0,
        }
    };

    let mut starts: Vec<Vec<f64>> = Vec::new();
    for i in 0..n {
        for s in [1.0, -1.0] {
            let mut e = vec![0.0; n];
            e[i] = s;
            starts.push(e);
        }
    }
    let mut rng = rng::substream(cfg.seed, &[stream::NORMS, op as u64, p_tag(p)]);
    for _ in 0..cfg.norm_starts() {
        starts.push((0..n).map(|_| rng.gen_range(-1.0..1.0)).collect());
    }

    let lower = vec![-1.0; n];
    let upper = vec![1.0; n];
    let (value, x) = starts
        .par_iter()
        .map(|x0| {
            let (x, _) = pattern_search(|x| -ratio(x), x0, &lower, &upper, 0.25, STEP_FLOOR, MAX_EVALS);
            (ratio(&x), x)
        })
        .reduce_with(|a, b| {
            let tie = 1e-12 * a.0.abs().max(b.0.abs()).max(1.0);
            if (a.0 - b.0).abs() <= tie {
                if lex_cmp(&b.1, &a.1).is_gt() {
                    b
                } else {
                    a
                }
            } else if b.0 > a.0 {
                b
            } else {
                a
            }
        })
        .expect("at least one start");

    let d = norm(&x, p);
    let witness: Vec<f64> = x.iter().map(|v| v / d).collect();
    Ok(NormReport { op, p, empirical_norm: value, closed_form_bound: bound, witness })
}

fn p_tag(p: NormP) -> u64 {
    match p {
        NormP::Inf => u64::MAX,
        NormP::P(p) => p.to_bits(),
    }
}

/// The exponents the CLI offers for order `m`: 1, 2, m, m/(m-1), inf
/// (deduplicated, in that order).
pub fn standard_exponents(m: usize) -> Vec<NormP> {
    let mut out: Vec<NormP> = Vec::new();
    for p in [NormP::P(1.0), NormP::P(2.0), NormP::P(m as f64), NormP::P(m as f64 / (m as f64 - 1.0)), NormP::Inf] {
        if !out.contains(&p) {
            out.push(p);
        }
    }
    out
}
