//! The constant β(A) and (strict) semi-positivity / copositivity tests.
//!
//! β(A) = min over {x >= 0, ||x||_inf = 1} of max_i x_i (A x^{m-1})_i.
//! The feasible set is the union of the n faces {x_k = 1, 0 <= x_j <= 1};
//! every face is scanned with a uniform grid and the best grid points, plus
//! random starts, are polished by pattern search.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::error::{Error, Result};
use crate::rng::{self, stream};
use crate::solve::pattern_search;
use crate::tensor::{IndexSet, Tensor};
use crate::vector::lex_cmp;

const REFINE_FLOOR: f64 = 1e-10;
const REFINE_MAX_EVALS: usize = 40_000;
const GRID_SEEDS_PER_FACE: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Certification {
    /// Full face grid followed by local refinement.
    GridRefine,
    /// Random multistart only; no grid bound on the gap.
    Multistart,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BetaResult {
    pub value: f64,
    pub argmin: Vec<f64>,
    pub certified_by: Certification,
    /// Points per axis of the face grid; 0 when no grid was used.
    pub grid_resolution: usize,
    /// Best value seen on the grid alone (before refinement).
    pub grid_value: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    StrictlySemiPositive,
    SemiPositiveOnly,
    NotSemiPositive,
    Undetermined,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::StrictlySemiPositive => "strictly_semi_positive",
            Verdict::SemiPositiveOnly => "semi_positive_only",
            Verdict::NotSemiPositive => "not_semi_positive",
            Verdict::Undetermined => "undetermined",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub verdict: Verdict,
    pub beta: BetaResult,
    /// A nonzero x >= 0 whose active products x_i (A x^{m-1})_i are all
    /// below `-tol`.
    pub counterexample: Option<Vec<f64>>,
    /// max over active i of x_i (A x^{m-1})_i at the counterexample.
    pub counterexample_value: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CopositivityReport {
    pub strict: bool,
    pub copositive: bool,
    /// min A x^m over {x >= 0, ||x||_inf = 1}, as found.
    pub min_value: f64,
    pub argmin: Vec<f64>,
}

/// max_i x_i (A x^{m-1})_i.
pub fn beta_objective(a: &Tensor, x: &[f64]) -> f64 {
    let y = a.contract_m1_unchecked(x);
    x.iter().zip(&y).map(|(xi, yi)| xi * yi).fold(f64::NEG_INFINITY, f64::max)
}

/// Local minima found on one face, plus the face's grid minimum.
type FaceResult = (Vec<(f64, Vec<f64>)>, Option<f64>);

/// max over i with x_i > 0 of x_i (A x^{m-1})_i; `None` for x = 0.
pub fn active_objective(a: &Tensor, x: &[f64]) -> Option<f64> {
    let y = a.contract_m1_unchecked(x);
    x.iter().zip(&y).filter(|(xi, _)| **xi > 0.0).map(|(xi, yi)| xi * yi).reduce(f64::max)
}

#[derive(Debug, Clone)]
pub(crate) struct FaceMin {
    pub value: f64,
    pub argmin: Vec<f64>,
    pub grid_value: Option<f64>,
    pub grid: Option<usize>,
}

/// Minimizes `f` over {x >= 0, ||x||_inf = 1}.
pub(crate) fn minimize_on_faces<F>(n: usize, f: F, cfg: &Config, task: &[u64]) -> FaceMin
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let grid = cfg.grid_resolution(n);
    let starts = cfg.beta_starts();

    let per_face: Vec<FaceResult> = (0..n)
        .into_par_iter()
        .map(|k| {
            let mut lower = vec![0.0; n];
            let upper = vec![1.0; n];
            lower[k] = 1.0;
            let mut seeds: Vec<(Vec<f64>, f64)> = Vec::new();
            let mut grid_best = None;

            if let Some(g) = grid {
                let pts = face_grid_best(n, k, g, &f, GRID_SEEDS_PER_FACE);
                grid_best = pts.first().map(|p| p.0);
                let h = 1.0 / (g - 1) as f64;
                seeds.extend(pts.into_iter().map(|(_, x)| (x, h)));
            }
            let mut task_k = task.to_vec();
            task_k.push(k as u64);
            let mut rng = rng::substream(cfg.seed, &task_k);
            for _ in 0..starts {
                let mut x: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
                x[k] = 1.0;
                seeds.push((x, 0.25));
            }

            let mut found: Vec<(f64, Vec<f64>)> = seeds
                .iter()
                .map(|(x0, step)| {
                    let (x, _) = pattern_search(&f, x0, &lower, &upper, *step, REFINE_FLOOR, REFINE_MAX_EVALS);
                    (f(&x), x)
                })
                .collect();
            if found.is_empty() {
                let mut x = vec![0.0; n];
                x[k] = 1.0;
                found.push((f(&x), x));
            }
            (found, grid_best)
        })
        .collect();

    let grid_value = per_face.iter().filter_map(|(_, g)| *g).reduce(f64::min);
    let (value, argmin) =
        per_face.into_iter().flat_map(|(c, _)| c).reduce(pick_min).expect("n >= 1 gives at least one face");
    FaceMin { value, argmin, grid_value, grid }
}

/// Smaller value wins; values within 1e-12 (relative) tie and the
/// lexicographically smaller vector wins.
fn pick_min(a: (f64, Vec<f64>), b: (f64, Vec<f64>)) -> (f64, Vec<f64>) {
    let tie = 1e-12 * a.0.abs().max(b.0.abs()).max(1.0);
    if (a.0 - b.0).abs() <= tie {
        if lex_cmp(&b.1, &a.1).is_lt() {
            b
        } else {
            a
        }
    } else if b.0 < a.0 {
        b
    } else {
        a
    }
}

/// The `keep` best points of the `g^(n-1)` grid on face `k`.
fn face_grid_best<F>(n: usize, k: usize, g: usize, f: &F, keep: usize) -> Vec<(f64, Vec<f64>)>
where
    F: Fn(&[f64]) -> f64,
{
    let free: Vec<usize> = (0..n).filter(|&i| i != k).collect();
    let total = g.pow(free.len() as u32);
    let h = 1.0 / (g - 1) as f64;
    let mut best: Vec<(f64, Vec<f64>)> = Vec::with_capacity(keep + 1);
    let mut x = vec![0.0; n];
    x[k] = 1.0;
    for flat in 0..total {
        let mut r = flat;
        for &i in &free {
            x[i] = (r % g) as f64 * h;
            r /= g;
        }
        let v = f(&x);
        if best.len() < keep || v < best[best.len() - 1].0 {
            let pos = best.partition_point(|(b, _)| *b <= v);
            best.insert(pos, (v, x.clone()));
            best.truncate(keep);
        }
    }
    best
}

pub fn beta(a: &Tensor, cfg: &Config) -> BetaResult {
    beta_task(a, cfg, &[stream::BETA])
}

pub(crate) fn beta_task(a: &Tensor, cfg: &Config, task: &[u64]) -> BetaResult {
    let fm = minimize_on_faces(a.dim(), |x| beta_objective(a, x), cfg, task);
    BetaResult {
        value: beta_objective(a, &fm.argmin),
        argmin: fm.argmin,
        certified_by: if fm.grid.is_some() { Certification::GridRefine } else { Certification::Multistart },
        grid_resolution: fm.grid.unwrap_or(0),
        grid_value: fm.grid_value,
    }
}

/// Strict semi-positivity holds iff β(A) > 0. When |β| is within `tol` the
/// tensor is semi-positive unless some principal sub-tensor has negative β,
/// which yields a point whose active products are all negative.
pub fn classify(a: &Tensor, cfg: &Config) -> Classification {
    let b = beta(a, cfg);
    let tol = cfg.tol;
    if b.value > tol {
        return Classification {
            verdict: Verdict::StrictlySemiPositive,
            beta: b,
            counterexample: None,
            counterexample_value: None,
        };
    }
    if b.value < -tol {
        let cx = b.argmin.clone();
        let v = active_objective(a, &cx);
        return Classification {
            verdict: Verdict::NotSemiPositive,
            beta: b,
            counterexample: Some(cx),
            counterexample_value: v,
        };
    }

    let n = a.dim();
    let worst = IndexSet::all_nonempty(n)
        .into_par_iter()
        .filter(|j| j.len() < n)
        .map(|j| {
            let mask = j.indices().iter().fold(0u64, |m, &i| m | 1 << i);
            let sub = a.principal_subtensor(&j).expect("support within range");
            let sb = beta_task(&sub, cfg, &[stream::BETA, 1 + mask]);
            (sb.value, j.embed(&sb.argmin, n))
        })
        .reduce_with(pick_min);

    if let Some((v, x)) = worst {
        if v < -tol {
            let value = active_objective(a, &x);
            return Classification {
                verdict: Verdict::NotSemiPositive,
                beta: b,
                counterexample: Some(x),
                counterexample_value: value,
            };
        }
    }
    let verdict = match b.certified_by {
        Certification::GridRefine => Verdict::SemiPositiveOnly,
        Certification::Multistart => Verdict::Undetermined,
    };
    Classification { verdict, beta: b, counterexample: None, counterexample_value: None }
}

/// Copositivity via min A x^m on {x >= 0, ||x||_inf = 1}. Only meaningful
/// (and only accepted) for symmetric tensors.
pub fn is_copositive(a: &Tensor, strict: bool, cfg: &Config) -> Result<CopositivityReport> {
    if !a.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let f = |x: &[f64]| {
        let y = a.contract_m1_unchecked(x);
        x.iter().zip(&y).map(|(p, q)| p * q).sum::<f64>()
    };
    let fm = minimize_on_faces(a.dim(), f, cfg, &[stream::COPOSITIVE]);
    let copositive = if strict { fm.value >= cfg.tol } else { fm.value > -cfg.tol };
    Ok(CopositivityReport { strict, copositive, min_value: fm.value, argmin: fm.argmin })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::unit_tensor;

    fn cfg() -> Config {
        Config::default()
    }

    #[test]
    fn beta_of_unit_tensor_is_one() {
        for m in 2..=4 {
            for n in 1..=3 {
                let b = beta(&unit_tensor(m, n).unwrap(), &cfg());
                assert!((b.value - 1.0).abs() < 1e-6, "m={m} n={n}: {}", b.value);
            }
        }
    }

    #[test]
    fn beta_of_diagonal_is_min_entry() {
        let d = Tensor::diagonal(4, &[2.0, 5.0]).unwrap();
        let b = beta(&d, &cfg());
        assert!((b.value - 2.0).abs() < 1e-6);
        assert_eq!(b.argmin, vec![1.0, 0.0]);
    }

    #[test]
    fn beta_negative_offdiagonal_matrix() {
        let a = Tensor::from_matrix(&[vec![0.0, -1.0], vec![-1.0, 0.0]]).unwrap();
        let b = beta(&a, &cfg());
        assert!((b.value + 1.0).abs() < 1e-6);
        assert_eq!(b.argmin, vec![1.0, 1.0]);
    }

    #[test]
    fn argmin_invariants() {
        let a = Tensor::from_matrix(&[vec![2.0, -1.0], vec![0.5, 1.0]]).unwrap();
        let b = beta(&a, &cfg());
        assert!(b.argmin.iter().all(|v| *v >= 0.0));
        assert_eq!(b.argmin.iter().cloned().fold(0.0, f64::max), 1.0);
        assert!((b.value - beta_objective(&a, &b.argmin)).abs() <= 1e-10);
    }

    #[test]
    fn classify_examples() {
        let c = classify(&unit_tensor(3, 3).unwrap(), &cfg());
        assert_eq!(c.verdict, Verdict::StrictlySemiPositive);

        let z = classify(&Tensor::zeros(3, 2).unwrap(), &cfg());
        assert_eq!(z.verdict, Verdict::SemiPositiveOnly);
        assert_eq!(z.beta.value, 0.0);

        let a = Tensor::from_matrix(&[vec![0.0, -1.0], vec![-1.0, 0.0]]).unwrap();
        let c = classify(&a, &cfg());
        assert_eq!(c.verdict, Verdict::NotSemiPositive);
        assert_eq!(c.counterexample, Some(vec![1.0, 1.0]));
    }

    #[test]
    fn negative_diagonal_is_caught_through_a_face() {
        // β = 0 here (x = e2 leaves a zero product), but a_22 < 0
        let a = Tensor::from_matrix(&[vec![1.0, 0.0], vec![0.0, -1.0]]).unwrap();
        let c = classify(&a, &cfg());
        assert!(c.beta.value.abs() <= 1e-12);
        assert_eq!(c.verdict, Verdict::NotSemiPositive);
        let cx = c.counterexample.unwrap();
        assert_eq!(cx, vec![0.0, 1.0]);
        assert!(c.counterexample_value.unwrap() < -1e-6);
    }

    #[test]
    fn copositivity_examples() {
        let i = unit_tensor(4, 3).unwrap();
        assert!(is_copositive(&i, true, &cfg()).unwrap().copositive);

        let a = Tensor::from_matrix(&[vec![0.0, -1.0], vec![-1.0, 0.0]]).unwrap();
        let r = is_copositive(&a, false, &cfg()).unwrap();
        assert!(!r.copositive);
        assert!((r.min_value + 2.0).abs() < 1e-9);

        let ns = Tensor::from_matrix(&[vec![1.0, 2.0], vec![0.0, 1.0]]).unwrap();
        assert_eq!(is_copositive(&ns, false, &cfg()), Err(Error::NotSymmetric));
    }

    #[test]
    fn scale_equivariance() {
        let a = Tensor::new(3, 2, vec![1.0, -0.3, 0.2, 0.1, 0.4, 0.0, -0.2, 2.0], false).unwrap();
        let b1 = beta(&a, &cfg()).value;
        let b3 = beta(&a.scale(3.0), &cfg()).value;
        assert!((b3 - 3.0 * b1).abs() <= 1e-8 * b3.abs().max(1.0), "{b1} {b3}");
    }
}
