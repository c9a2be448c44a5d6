//! Cross-checks against oracles that share no code with the solvers.
#![allow(clippy::needless_range_loop)]

mod common;

use common::*;
use rand::Rng;

use semipos_core::config::Config;
use semipos_core::eigen::{delta_h_plus, delta_z_plus, distinct_values, pareto_h_eigenvalues, z_plus_eigenpairs};
use semipos_core::generate::{generate, Family};
use semipos_core::norms::{norm_bound, Operator};
use semipos_core::spositivity::{beta, classify, is_copositive, Verdict};
use semipos_core::tcp::{solve_enumeration, solve_iterative, verify_solution, TcpInstance};
use semipos_core::{NormP, Tensor};

#[test]
fn classify_matches_definition_grid_on_small_tensors() {
    let cfg = Config::default();
    let mut r = rng(11);
    for k in 0..24 {
        let m = 2 + k % 2;
        let n = 2 + (k / 2) % 2;
        let a = random_tensor(&mut r, m, n, -1.0, 1.0);
        let got = classify(&a, &cfg).verdict;
        assert_eq!(got, grid_verdict(&a, 41, cfg.tol), "case {k}: m={m} n={n} {a:?}");
    }
}

#[test]
fn enumeration_agrees_with_lemke_on_p_matrices() {
    let cfg = Config::default();
    let mut r = rng(12);
    for k in 0..40 {
        let n = 2 + k % 3;
        let family = if k % 2 == 0 { Family::DiagDominant } else { Family::MatrixM2 };
        let a = generate(&spec(family, 2, n, 100 + k as u64), &cfg).unwrap().tensor;
        let q: Vec<f64> = (0..n).map(|_| r.gen_range(-2.0..1.0)).collect();
        let rows = matrix_rows(&a);
        let z = lemke(&rows, &q).expect("Lemke terminates on a P-matrix");
        let inst = TcpInstance::new(a.clone(), q.clone()).unwrap();
        let sols = solve_enumeration(&inst, &cfg).unwrap();
        // strictly diagonally dominant with positive diagonal: a P-matrix, so the solution is unique
        assert_eq!(sols.len(), 1, "case {k}: {rows:?} q={q:?}");
        assert!(max_abs_diff(&sols[0].x, &z) <= 1e-8, "case {k}: {:?} vs {z:?}", sols[0].x);
    }
}

#[test]
fn matrix_pareto_spectrum_matches_principal_submatrix_oracle() {
    let cfg = Config::default();
    let mut r = rng(13);
    for k in 0..30 {
        let n = 2 + k % 3;
        let mut rows = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in i..n {
                let v = r.gen_range(-1.0..1.0);
                rows[i][j] = v;
                rows[j][i] = v;
            }
        }
        let a = Tensor::from_matrix(&rows).unwrap();
        let got = distinct_values(&pareto_h_eigenvalues(&a, &cfg));
        let want = matrix_pareto(&rows);
        assert_eq!(got.len(), want.len(), "case {k}: {got:?} vs {want:?}");
        assert!(max_abs_diff(&got, &want) <= 1e-8, "case {k}: {got:?} vs {want:?}");
    }
}

#[test]
fn iterative_solution_is_among_enumerated_ones() {
    let cfg = Config::default();
    let mut r = rng(14);
    let corpus = corpus(30, &[2, 3, 4], &[2, 3], 200);
    for (label, a) in corpus {
        let q: Vec<f64> = (0..a.dim()).map(|_| r.gen_range(-1.0..1.0)).collect();
        let inst = TcpInstance::new(a, q).unwrap();
        let all = solve_enumeration(&inst, &cfg).unwrap();
        assert!(!all.is_empty(), "{label}");
        let it = solve_iterative(&inst, &cfg).unwrap();
        assert!(verify_solution(&inst, &it.x).unwrap().pass, "{label}");
        let d = all.iter().map(|s| max_abs_diff(&s.x, &it.x)).fold(f64::INFINITY, f64::min);
        assert!(d <= 1e-6, "{label}: distance {d}");
    }
}

#[test]
fn copositivity_agrees_with_classification_for_symmetric_tensors() {
    let cfg = Config::default();
    for (label, a) in corpus(24, &[2, 3, 4], &[2, 3], 300) {
        if !a.is_symmetric() {
            continue;
        }
        let strict = is_copositive(&a, true, &cfg).unwrap().copositive;
        assert_eq!(strict, classify(&a, &cfg).verdict == Verdict::StrictlySemiPositive, "{label}");
    }
}

#[test]
fn beta_against_eigen_and_norm_quantities() {
    let cfg = Config::default();
    for (label, a) in corpus(18, &[2, 3, 4], &[2, 3], 400) {
        let b = beta(&a, &cfg).value;
        let m = a.order() as i32;
        let n = a.dim() as f64;
        let dh = delta_h_plus(&a, &cfg).unwrap().value;
        assert!(b <= dh + 1e-6, "{label}: beta {b} > delta_h+ {dh}");
        if m % 2 == 0 {
            let dz = delta_z_plus(&a, &cfg).unwrap().value;
            assert!(b <= n.powi((m - 2) / 2) * dz + 1e-6, "{label}: beta {b}, delta_z+ {dz}");
            let f = norm_bound(&a, Operator::F, NormP::Inf).unwrap();
            assert!(b <= f.powi(m - 1) + 1e-8, "{label}");
        }
        let t = norm_bound(&a, Operator::T, NormP::Inf).unwrap();
        assert!(b <= n.powf((m - 2) as f64 / 2.0) * t + 1e-8, "{label}");
        let dmin = a.diagonal_entries().into_iter().fold(f64::INFINITY, f64::min);
        assert!(b <= dmin + 1e-8, "{label}");
        assert!(dmin > 0.0, "{label}");
        assert!(a.row_sums().iter().any(|&s| s > 0.0), "{label}");
    }
}

#[test]
fn z_plus_values_of_symmetric_matrices_match_dense_eigensolver() {
    let cfg = Config::default();
    for (label, a) in corpus(12, &[2], &[2, 3], 500) {
        if !a.is_symmetric() {
            continue;
        }
        let rows = matrix_rows(&a);
        let dense = nalgebra::DMatrix::from_fn(a.dim(), a.dim(), |i, j| rows[i][j]).symmetric_eigen();
        let mut want: Vec<f64> = (0..a.dim())
            .filter(|&k| {
                let v = dense.eigenvectors.column(k);
                v.iter().all(|&c| c >= -1e-12) || v.iter().all(|&c| c <= 1e-12)
            })
            .map(|k| dense.eigenvalues[k])
            .collect();
        want.sort_by(|x, y| x.partial_cmp(y).unwrap());
        let got: Vec<f64> = {
            let recs = z_plus_eigenpairs(&a, &cfg);
            let full: Vec<_> = recs.into_iter().filter(|r| r.support.len() == a.dim()).collect();
            distinct_values(&full)
        };
        // full-support records are the nonnegative eigenvectors with no zero entry
        for g in &got {
            assert!(want.iter().any(|w| (w - g).abs() <= 1e-8), "{label}: {got:?} vs {want:?}");
        }
    }
}

#[test]
fn generated_tensors_pass_definition_grid() {
    let cfg = Config::default();
    for (label, a) in corpus(16, &[2, 3], &[2, 3], 600) {
        assert_eq!(grid_verdict(&a, 41, cfg.tol), Verdict::StrictlySemiPositive, "{label}");
    }
}
