//! Numerical building blocks shared by the β, norm, eigen and TCP modules:
//! a box-constrained pattern search and a damped Newton solver.

use nalgebra::{DMatrix, DVector};

/// Box-constrained compass search.
///
/// Tries `±step` along each coordinate, then along each pairwise diagonal
/// `±e_i ± e_j` (kinks of max-type objectives often need two coordinates to
/// move together); halves the step when nothing improves and stops at
/// `step_floor`. Coordinates with `lower[i] == upper[i]` stay fixed.
pub fn pattern_search<F>(
    mut f: F,
    x0: &[f64],
    lower: &[f64],
    upper: &[f64],
    step0: f64,
    step_floor: f64,
    max_evals: usize,
) -> (Vec<f64>, f64)
where
    F: FnMut(&[f64]) -> f64,
{
    let n = x0.len();
    let free: Vec<usize> = (0..n).filter(|&i| upper[i] > lower[i]).collect();
    let mut x: Vec<f64> = x0.iter().enumerate().map(|(i, v)| v.clamp(lower[i], upper[i])).collect();
    let mut fx = f(&x);
    let mut step = step0;
    let mut evals = 1usize;
    let mut trial = x.clone();

    let mut directions: Vec<Vec<(usize, f64)>> = Vec::new();
    for &i in &free {
        directions.push(vec![(i, 1.0)]);
        directions.push(vec![(i, -1.0)]);
    }
    for (a, &i) in free.iter().enumerate() {
        for &j in &free[a + 1..] {
            for (si, sj) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
                directions.push(vec![(i, si), (j, sj)]);
            }
        }
    }
    let n_coord = 2 * free.len();

    while step >= step_floor && evals < max_evals {
        let mut improved = false;
        for (d, dir) in directions.iter().enumerate() {
            // diagonals only once the compass moves have failed
            if d == n_coord && improved {
                break;
            }
            trial.copy_from_slice(&x);
            for &(i, s) in dir {
                trial[i] = (trial[i] + s * step).clamp(lower[i], upper[i]);
            }
            if trial == x {
                continue;
            }
            let ft = f(&trial);
            evals += 1;
            if ft < fx {
                fx = ft;
                x.copy_from_slice(&trial);
                improved = true;
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    (x, fx)
}

#[derive(Debug, Clone)]
pub struct NewtonOutcome {
    pub z: Vec<f64>,
    pub residual_inf: f64,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy)]
pub struct NewtonOptions {
    pub max_iter: usize,
    pub step_tol: f64,
    pub residual_tol: f64,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        NewtonOptions { max_iter: 200, step_tol: 1e-12, residual_tol: 1e-13 }
    }
}

/// Damped Newton for a square system `F(z) = 0`.
///
/// `system(z)` returns the residual and the row-major Jacobian. Steps solve
/// the linearization in the least-squares sense (SVD), so singular Jacobians
/// from degenerate eigenspaces still yield a minimum-norm step. Step length
/// is halved until `||F||_2` decreases.
pub fn damped_newton<S>(mut system: S, z0: &[f64], opts: NewtonOptions) -> NewtonOutcome
where
    S: FnMut(&[f64]) -> (Vec<f64>, Vec<f64>),
{
    let k = z0.len();
    let mut z = z0.to_vec();
    let (mut res, mut jac) = system(&z);
    let mut res_norm = l2(&res);
    let mut iterations = 0;
    let mut converged = false;

    while iterations < opts.max_iter {
        if inf(&res) <= opts.residual_tol * (1.0 + inf(&z)) {
            converged = true;
            break;
        }
        iterations += 1;
        let j = DMatrix::from_row_slice(k, k, &jac);
        let rhs = DVector::from_iterator(k, res.iter().map(|v| -v));
        let svd = j.svd(true, true);
        let sigma_max = svd.singular_values.max();
        let step = match svd.solve(&rhs, sigma_max * 1e-13) {
            Ok(s) => s,
            Err(_) => break,
        };
        if step.iter().any(|v| !v.is_finite()) {
            break;
        }

        let mut t = 1.0;
        let mut accepted = false;
        let mut trial = vec![0.0; k];
        for _ in 0..40 {
            for i in 0..k {
                trial[i] = z[i] + t * step[i];
            }
            let (r, jj) = system(&trial);
            let rn = l2(&r);
            if rn.is_finite() && rn < res_norm {
                z.copy_from_slice(&trial);
                res = r;
                jac = jj;
                res_norm = rn;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        let step_norm = t * step.norm();
        if !accepted {
            // no decrease along the Newton direction: at a (possibly
            // nonzero) local minimum of ||F||
            converged = inf(&res) <= 1e-9 * (1.0 + inf(&z));
            break;
        }
        if step_norm <= opts.step_tol * (1.0 + l2(&z)) {
            converged = inf(&res) <= 1e-9 * (1.0 + inf(&z));
            break;
        }
    }
    if !converged && inf(&res) <= opts.residual_tol * (1.0 + inf(&z)) {
        converged = true;
    }
    NewtonOutcome { residual_inf: inf(&res), z, iterations, converged }
}

fn l2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn inf(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |a, x| a.max(x.abs()))
}
