//! Dense real least squares by Householder QR.

use super::RMat;

/// Minimizes `‖A x − b‖₂`. Returns `None` when `A` is numerically rank
/// deficient (some `|R_kk| ≤ rank_tol · max_k |R_kk|`) or has more columns than rows.
pub fn lstsq(a: &RMat, b: &[f64], rank_tol: f64) -> Option<Vec<f64>> {
    let (m, n) = a.dims();
    assert_eq!(b.len(), m, "right-hand side length mismatch");
    if n == 0 {
        return Some(Vec::new());
    }
    if n > m {
        return None;
    }
    let mut r: Vec<Vec<f64>> = (0..n).map(|j| a.col(j)).collect();
    let mut y = b.to_vec();
    let mut diag = vec![0.0; n];
    for k in 0..n {
        let norm = r[k][k..].iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            return None;
        }
        let alpha = if r[k][k] > 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = r[k][k..].to_vec();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|x| x * x).sum();
        let reflect = |col: &mut [f64]| {
            let dot: f64 = v.iter().zip(col.iter()).map(|(p, q)| p * q).sum();
            let f = 2.0 * dot / vnorm2;
            col.iter_mut().zip(&v).for_each(|(q, p)| *q -= f * p);
        };
        if vnorm2 > 0.0 {
            for col in r.iter_mut().skip(k) {
                reflect(&mut col[k..]);
            }
            reflect(&mut y[k..]);
        }
        diag[k] = r[k][k];
    }
    let scale = diag.iter().fold(0.0f64, |acc, d| acc.max(d.abs()));
    if diag.iter().any(|d| d.abs() <= rank_tol * scale) {
        return None;
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|j| r[j][i] * x[j]).sum();
        x[i] = (y[i] - s) / r[i][i];
    }
    Some(x)
}
