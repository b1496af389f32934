//! Nonnegative least squares, Lawson-Hanson active set method.

use crate::linalg::{lstsq, RMat};

const RANK_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct Nnls {
    pub x: Vec<f64>,
    /// `‖A x − b‖₂` at the returned point.
    pub residual: f64,
}

fn residual_vec(a: &RMat, x: &[f64], b: &[f64]) -> Vec<f64> {
    a.mat_vec(x).iter().zip(b).map(|(ax, bi)| bi - ax).collect()
}

fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn restricted(a: &RMat, cols: &[usize]) -> RMat {
    RMat::from_fn(a.rows(), cols.len(), |i, k| a[(i, cols[k])])
}

/// `argmin_{x ≥ 0} ‖A x − b‖₂`.
pub fn nnls(a: &RMat, b: &[f64]) -> Nnls {
    let (m, n) = a.dims();
    assert_eq!(b.len(), m, "right-hand side length mismatch");
    let at = a.transpose();
    let scale = a.norm_max().max(1.0) * norm2(b).max(1.0);
    let tol = 1e-14 * scale * (m.max(n) as f64);
    let mut x = vec![0.0; n];
    let mut passive = vec![false; n];
    let mut blocked = vec![false; n];
    let max_outer = 3 * n + 10;
    for _ in 0..max_outer {
        let w = at.mat_vec(&residual_vec(a, &x, b));
        let candidate =
            (0..n).filter(|&j| !passive[j] && !blocked[j] && w[j] > tol).max_by(|&i, &j| w[i].total_cmp(&w[j]));
        let Some(j) = candidate else { break };
        passive[j] = true;
        loop {
            let cols: Vec<usize> = (0..n).filter(|&k| passive[k]).collect();
            let Some(zp) = lstsq(&restricted(a, &cols), b, RANK_TOL) else {
                // The entering column is dependent on the passive set: it cannot help.
                passive[j] = false;
                blocked[j] = true;
                break;
            };
            let mut z = vec![0.0; n];
            cols.iter().zip(&zp).for_each(|(&k, &v)| z[k] = v);
            if cols.iter().all(|&k| z[k] > 0.0) {
                x = z;
                blocked.iter_mut().for_each(|b| *b = false);
                break;
            }
            let alpha =
                cols.iter().filter(|&&k| z[k] <= 0.0).map(|&k| x[k] / (x[k] - z[k])).fold(f64::INFINITY, f64::min);
            for k in 0..n {
                x[k] += alpha * (z[k] - x[k]);
            }
            for &k in &cols {
                if x[k] <= 1e-15 {
                    x[k] = 0.0;
                    passive[k] = false;
                }
            }
            if !passive.iter().any(|&p| p) {
                break;
            }
        }
    }
    let residual = norm2(&residual_vec(a, &x, b));
    Nnls { x, residual }
}
