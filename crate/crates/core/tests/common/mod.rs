//! Corpora and solver-independent oracles shared by the integration tests.
#![allow(dead_code, clippy::needless_range_loop)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use semipos_core::config::Config;
use semipos_core::generate::{generate, Family, GeneratorParams, GeneratorSpec};
use semipos_core::spositivity::Verdict;
use semipos_core::Tensor;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Dense tensor with entries uniform in `[lo, hi)`.
pub fn random_tensor(r: &mut ChaCha8Rng, m: usize, n: usize, lo: f64, hi: f64) -> Tensor {
    let len = n.pow(m as u32);
    let entries = (0..len).map(|_| r.gen_range(lo..hi)).collect();
    Tensor::new(m, n, entries, false).unwrap()
}

pub fn spec(family: Family, m: usize, n: usize, seed: u64) -> GeneratorSpec {
    GeneratorSpec { family, m, n, seed, params: GeneratorParams::default() }
}

/// `count` strictly semi-positive tensors cycling through every family and
/// the given orders and dimensions.
pub fn corpus(count: usize, orders: &[usize], dims: &[usize], seed: u64) -> Vec<(String, Tensor)> {
    let mut combos = Vec::new();
    for &m in orders {
        for &n in dims {
            for f in Family::ALL {
                if f == Family::MatrixM2 && m != 2 {
                    continue;
                }
                combos.push((f, m, n));
            }
        }
    }
    let cfg = Config::default();
    (0..count)
        .map(|k| {
            let (f, m, n) = combos[k % combos.len()];
            let s = spec(f, m, n, seed.wrapping_add(k as u64));
            let g = generate(&s, &cfg).unwrap();
            (format!("{}/m{m}/n{n}/k{k}", f.as_str()), g.tensor)
        })
        .collect()
}

/// Every point of the feasible set `{x >= 0, max x = 1}` whose coordinates lie
/// on a `points`-per-axis grid.
pub fn feasible_grid(n: usize, points: usize) -> Vec<Vec<f64>> {
    let h = 1.0 / (points - 1) as f64;
    let mut out = Vec::new();
    let mut idx = vec![0usize; n];
    loop {
        if idx.iter().any(|&i| i == points - 1) {
            out.push(idx.iter().map(|&i| i as f64 * h).collect());
        }
        let mut k = 0;
        loop {
            if k == n {
                return out;
            }
            idx[k] += 1;
            if idx[k] < points {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Semi-positivity decided directly from the definition on a grid: strict
/// when every point has an active coordinate with `(Ax^{m-1})_k > tol`,
/// semi-positive when every point has one with `(Ax^{m-1})_k >= -tol`.
pub fn grid_verdict(a: &Tensor, points: usize, tol: f64) -> Verdict {
    let mut strict = true;
    for x in feasible_grid(a.dim(), points) {
        let y = a.contract_m1(&x).unwrap();
        let best = (0..x.len()).filter(|&k| x[k] > 0.0).map(|k| y[k]).fold(f64::NEG_INFINITY, f64::max);
        if best < -tol {
            return Verdict::NotSemiPositive;
        }
        if best <= tol {
            strict = false;
        }
    }
    if strict {
        Verdict::StrictlySemiPositive
    } else {
        Verdict::SemiPositiveOnly
    }
}

/// Lemke's complementary pivoting for `w = q + M z`, `w, z >= 0`, `w.z = 0`,
/// with covering vector of ones. `None` on ray termination.
pub fn lemke(m: &[Vec<f64>], q: &[f64]) -> Option<Vec<f64>> {
    let n = q.len();
    if q.iter().all(|&v| v >= 0.0) {
        return Some(vec![0.0; n]);
    }
    // columns: w_0..w_{n-1}, z_0..z_{n-1}, z0, rhs
    let cols = 2 * n + 2;
    let z0 = 2 * n;
    let rhs = 2 * n + 1;
    let mut t = vec![vec![0.0; cols]; n];
    for i in 0..n {
        t[i][i] = 1.0;
        for j in 0..n {
            t[i][n + j] = -m[i][j];
        }
        t[i][z0] = -1.0;
        t[i][rhs] = q[i];
    }
    let mut basis: Vec<usize> = (0..n).collect();
    let pivot = |t: &mut Vec<Vec<f64>>, r: usize, c: usize| {
        let p = t[r][c];
        for v in t[r].iter_mut() {
            *v /= p;
        }
        for i in 0..t.len() {
            if i != r {
                let f = t[i][c];
                if f != 0.0 {
                    for j in 0..cols {
                        t[i][j] -= f * t[r][j];
                    }
                }
            }
        }
    };
    let r0 = (0..n).min_by(|&a, &b| q[a].partial_cmp(&q[b]).unwrap()).unwrap();
    pivot(&mut t, r0, z0);
    let mut leaving = basis[r0];
    basis[r0] = z0;
    for _ in 0..1000 {
        let entering = if leaving < n { leaving + n } else { leaving - n };
        let mut best: Option<(usize, f64)> = None;
        for i in 0..n {
            if t[i][entering] > 1e-12 {
                let ratio = t[i][rhs] / t[i][entering];
                let better = match best {
                    None => true,
                    Some((bi, br)) => ratio < br - 1e-12 || (ratio <= br + 1e-12 && basis[i] == z0 && basis[bi] != z0),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
        }
        let (r, _) = best?;
        pivot(&mut t, r, entering);
        leaving = basis[r];
        basis[r] = entering;
        if leaving == z0 {
            let mut z = vec![0.0; n];
            for (i, &b) in basis.iter().enumerate() {
                if (n..2 * n).contains(&b) {
                    z[b - n] = t[i][rhs];
                }
            }
            return Some(z);
        }
    }
    None
}

/// Pareto eigenvalues of a symmetric matrix: for each support `J`, the
/// eigenvalues of `A_J` with a strictly positive eigenvector whose zero
/// extension satisfies `(Ax)_i >= 0` off `J`. Assumes simple eigenvalues.
pub fn matrix_pareto(a: &[Vec<f64>]) -> Vec<f64> {
    let n = a.len();
    let mut vals = Vec::new();
    for mask in 1u32..(1 << n) {
        let j: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        let sub = nalgebra::DMatrix::from_fn(j.len(), j.len(), |r, c| a[j[r]][j[c]]);
        let eig = sub.symmetric_eigen();
        for k in 0..j.len() {
            let v = eig.eigenvectors.column(k);
            let sign = if v[0] < 0.0 { -1.0 } else { 1.0 };
            if v.iter().any(|&c| sign * c <= 1e-9) {
                continue;
            }
            let mut x = vec![0.0; n];
            for (r, &i) in j.iter().enumerate() {
                x[i] = sign * v[r];
            }
            let off_ok =
                (0..n).filter(|i| !j.contains(i)).all(|i| (0..n).map(|c| a[i][c] * x[c]).sum::<f64>() >= -1e-8);
            if off_ok {
                vals.push(eig.eigenvalues[k]);
            }
        }
    }
    vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    vals.dedup_by(|a, b| (*a - *b).abs() <= 1e-6);
    vals
}

pub fn matrix_rows(t: &Tensor) -> Vec<Vec<f64>> {
    let n = t.dim();
    (0..n).map(|i| (0..n).map(|j| t.get(&[i, j])).collect()).collect()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
