//! Cyclic Jacobi eigensolver for Hermitian (or real symmetric) matrices,
//! and nullspaces derived from it.

use super::{Mat, Scalar};
use crate::error::{Error, Result};

const OFF_TOL: f64 = 1e-13;
const MAX_SWEEPS: usize = 100;
const HERMITIAN_TOL: f64 = 1e-10;

/// Eigendecomposition `H = V Λ V†`, eigenvalues ascending.
#[derive(Clone, Debug)]
pub struct Eigh<T: Scalar> {
    pub values: Vec<f64>,
    /// Eigenvectors as columns, in the order of `values`.
    pub vectors: Mat<T>,
}

impl<T: Scalar> Eigh<T> {
    pub fn reconstruct(&self) -> Mat<T> {
        let n = self.values.len();
        let lam = Mat::<T>::from_fn(n, n, |i, j| if i == j { T::from_re(self.values[i]) } else { T::zero() });
        self.vectors.matmul(&lam).matmul(&self.vectors.adjoint())
    }

    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        *self.values.last().unwrap()
    }
}

fn off_norm<T: Scalar>(a: &Mat<T>) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].modulus().powi(2);
            }
        }
    }
    s.sqrt()
}

/// Full eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
///
/// Each rotation first removes the phase of the pivot `a_pq` and then applies
/// a real plane rotation, so the same code serves real symmetric input.
pub fn eigh<T: Scalar>(h: &Mat<T>) -> Result<Eigh<T>> {
    if !h.is_square() {
        return Err(Error::Dimension { expected: "square", got: h.dims() });
    }
    let scale = h.norm_fro().max(1.0);
    let defect = h.hermiticity_defect();
    if defect > HERMITIAN_TOL * scale {
        return Err(Error::NotHermitian(defect));
    }
    let n = h.rows();
    let mut a = h.clone();
    let mut v = Mat::<T>::identity(n);
    let threshold = OFF_TOL * scale;

    let mut converged = false;
    for sweep in 0..MAX_SWEEPS {
        if off_norm(&a) <= threshold {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let mag = apq.modulus();
                if mag < f64::MIN_POSITIVE {
                    // Zero or subnormal: 1/mag would overflow.
                    a[(p, q)] = T::zero();
                    a[(q, p)] = T::zero();
                    continue;
                }
                let app = a[(p, p)].re();
                let aqq = a[(q, q)].re();
                // Pivot negligible against both diagonal entries: drop it.
                if sweep > 3 && app.abs() + 100.0 * mag == app.abs() && aqq.abs() + 100.0 * mag == aqq.abs() {
                    a[(p, q)] = T::zero();
                    a[(q, p)] = T::zero();
                    continue;
                }
                let phase = apq.scale(1.0 / mag);
                let theta = (aqq - app) / (2.0 * mag);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let cs = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * cs;
                // U = D R restricted to the (p, q) plane.
                let upp = T::from_re(cs);
                let upq = T::from_re(sn);
                let uqp = phase.conj().scale(-sn);
                let uqq = phase.conj().scale(cs);
                rotate(&mut a, &mut v, p, q, [upp, upq, uqp, uqq]);
                a[(p, p)] = T::from_re(app - t * mag);
                a[(q, q)] = T::from_re(aqq + t * mag);
                a[(p, q)] = T::zero();
                a[(q, p)] = T::zero();
            }
        }
    }
    if !converged {
        let off = off_norm(&a);
        if off > 1e-10 * scale {
            return Err(Error::NoConvergence { sweeps: MAX_SWEEPS, off_norm: off });
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re()).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));
    let values = order.iter().map(|&i| diag[i]).collect();
    let vectors = Mat::<T>::from_fn(n, n, |r, k| v[(r, order[k])]);
    Ok(Eigh { values, vectors })
}

// A <- U† A U, V <- V U for U acting on the (p, q) plane.
fn rotate<T: Scalar>(a: &mut Mat<T>, v: &mut Mat<T>, p: usize, q: usize, u: [T; 4]) {
    let [upp, upq, uqp, uqq] = u;
    let n = a.rows();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * upp + akq * uqp;
        a[(k, q)] = akp * upq + akq * uqq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = upp.conj() * apk + uqp.conj() * aqk;
        a[(q, k)] = upq.conj() * apk + uqq.conj() * aqk;
    }
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * upp + vkq * uqp;
        v[(k, q)] = vkp * upq + vkq * uqq;
    }
}

/// Ascending eigenvalues of a Hermitian matrix.
pub fn hermitian_eigs<T: Scalar>(h: &Mat<T>) -> Result<Vec<f64>> {
    Ok(eigh(h)?.values)
}

/// Orthonormal nullspace basis together with the singular-value gap.
#[derive(Clone, Debug)]
pub struct NullSpace<T> {
    pub basis: Vec<Vec<T>>,
    /// Largest singular value of `L`.
    pub sigma_max: f64,
    /// Largest singular value classified as zero.
    pub sigma_null: f64,
    /// Smallest singular value above the threshold, if any.
    pub sigma_gap: Option<f64>,
}

/// Nullspace of `L` from the eigendecomposition of `L†L`.
///
/// A direction is null when its singular value is at most
/// `tol · max(1, σ_max)`. Because `L†L` squares singular values, `tol`
/// much below `1e-7` classifies roundoff as signal.
pub fn nullspace<T: Scalar>(l: &Mat<T>, tol: f64) -> Result<NullSpace<T>> {
    assert!(tol > 0.0, "nullspace tolerance must be positive");
    let gram = l.adjoint().matmul(l);
    let e = eigh(&gram)?;
    let sv: Vec<f64> = e.values.iter().map(|&x| x.max(0.0).sqrt()).collect();
    let sigma_max = sv.iter().cloned().fold(0.0, f64::max);
    let cut = tol * sigma_max.max(1.0);
    let mut basis = Vec::new();
    let mut sigma_null = 0.0f64;
    let mut sigma_gap: Option<f64> = None;
    for (k, &s) in sv.iter().enumerate() {
        if s <= cut {
            basis.push(e.vectors.col(k));
            sigma_null = sigma_null.max(s);
        } else {
            sigma_gap = Some(sigma_gap.map_or(s, |g| g.min(s)));
        }
    }
    Ok(NullSpace { basis, sigma_max, sigma_null, sigma_gap })
}
