//! Two-qubit superoperators and the SU(2)-covariant channel families.
//!
//! # Conventions
//!
//! Operators are vectorized by column stacking, `vec(X)[i + 4j] = X[i][j]`,
//! so `X ↦ A X B` has matrix `Bᵀ ⊗ A`. The Choi matrix is
//! `J = Σ_ij |i⟩⟨j| ⊗ S(|i⟩⟨j|)` (input factor first), which makes the
//! identity channel's Choi matrix rank one with eigenvalue 4, and trace
//! preservation reads `Tr_out J = 𝟙₄`.
//!
//! The Pauli transfer matrix of `S` is `T[k][l] = Tr[P_k S(P_l)]` with the
//! orthonormal basis `P_{4μ+ν} = σ_μ⊗σ_ν / 2`; it is real for
//! Hermiticity-preserving maps.

mod cg;
mod commutant;
mod identical;

use crate::error::{Error, Result};
use crate::linalg::{c, hermitian_eigs, partial_trace, CMat, Party, RMat, C64};
use crate::qubit::{pauli, DensityMatrix};

pub use cg::clebsch_gordan;
#[cfg(test)]
pub(crate) use commutant::random_density;
pub use commutant::{commutant_basis, covariance_residual, haar_su2, subspace_distance, CommutantBasis, SignalMode};
pub use identical::{family_identical, sector_map, SixParams, SIX_INDEX};

const DIM: usize = 4;
const VDIM: usize = DIM * DIM;

/// A linear map on 4×4 operators, as a 16×16 matrix on column-stacked vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct SuperOp {
    mat: CMat,
}

fn vec_op(x: &CMat) -> Vec<C64> {
    let mut v = vec![c(0.0, 0.0); VDIM];
    for i in 0..DIM {
        for j in 0..DIM {
            v[i + DIM * j] = x[(i, j)];
        }
    }
    v
}

fn unvec_op(v: &[C64]) -> CMat {
    CMat::from_fn(DIM, DIM, |i, j| v[i + DIM * j])
}

fn unit_op(i: usize, j: usize) -> CMat {
    let mut e = CMat::zeros(DIM, DIM);
    e[(i, j)] = c(1.0, 0.0);
    e
}

/// Columns are `vec(σ_μ⊗σ_ν / 2)`; unitary.
pub fn pauli_basis_matrix() -> CMat {
    let mut b = CMat::zeros(VDIM, VDIM);
    for mu in 0..4 {
        for nu in 0..4 {
            let v = vec_op(&pauli::pair(mu, nu));
            for (r, z) in v.into_iter().enumerate() {
                b[(r, 4 * mu + nu)] = z * 0.5;
            }
        }
    }
    b
}

impl SuperOp {
    pub fn from_matrix(mat: CMat) -> Result<Self> {
        if mat.dims() != (VDIM, VDIM) {
            return Err(Error::Dimension { expected: "16x16", got: mat.dims() });
        }
        Ok(SuperOp { mat })
    }

    /// Tabulates a linear map by applying it to the matrix units.
    pub fn from_map(f: impl Fn(&CMat) -> CMat) -> Self {
        let mut mat = CMat::zeros(VDIM, VDIM);
        for i in 0..DIM {
            for j in 0..DIM {
                let out = vec_op(&f(&unit_op(i, j)));
                for (r, z) in out.into_iter().enumerate() {
                    mat[(r, i + DIM * j)] = z;
                }
            }
        }
        SuperOp { mat }
    }

    pub fn identity() -> Self {
        SuperOp { mat: CMat::identity(VDIM) }
    }

    /// `X ↦ A X A†`.
    pub fn conjugation(a: &CMat) -> Self {
        SuperOp { mat: a.conj().kron(a) }
    }

    pub fn matrix(&self) -> &CMat {
        &self.mat
    }

    pub fn apply(&self, x: &CMat) -> CMat {
        assert_eq!(x.dims(), (DIM, DIM), "superoperators act on 4x4 operators");
        unvec_op(&self.mat.mat_vec(&vec_op(x)))
    }

    pub fn apply_state(&self, rho: &DensityMatrix) -> CMat {
        self.apply(rho.mat())
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &SuperOp) -> SuperOp {
        SuperOp { mat: self.mat.matmul(&other.mat) }
    }

    pub fn add(&self, other: &SuperOp) -> SuperOp {
        SuperOp { mat: &self.mat + &other.mat }
    }

    pub fn scale(&self, s: f64) -> SuperOp {
        SuperOp { mat: self.mat.scaled(c(s, 0.0)) }
    }

    /// Linear combination `Σ w_k S_k`.
    pub fn combination(terms: &[(f64, &SuperOp)]) -> SuperOp {
        let mut mat = CMat::zeros(VDIM, VDIM);
        for (w, s) in terms {
            if *w != 0.0 {
                mat = &mat + &s.mat.scaled(c(*w, 0.0));
            }
        }
        SuperOp { mat }
    }

    pub fn choi(&self) -> ChoiMatrix {
        let mat = CMat::from_fn(VDIM, VDIM, |r, s| {
            let (i, a) = (r / DIM, r % DIM);
            let (j, b) = (s / DIM, s % DIM);
            self.mat[(a + DIM * b, i + DIM * j)]
        });
        ChoiMatrix { mat }
    }

    /// `max |S(X†) − S(X)†|` over matrix units.
    pub fn hermiticity_preservation_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..DIM {
            for j in 0..DIM {
                for a in 0..DIM {
                    for b in 0..DIM {
                        let lhs = self.mat[(a + DIM * b, j + DIM * i)];
                        let rhs = self.mat[(b + DIM * a, i + DIM * j)].conj();
                        worst = worst.max((lhs - rhs).norm());
                    }
                }
            }
        }
        worst
    }

    /// Real Pauli transfer matrix; the imaginary remainder is dropped.
    pub fn pauli_transfer(&self) -> RMat {
        let b = pauli_basis_matrix();
        b.adjoint().matmul(&self.mat).matmul(&b).re()
    }

    pub fn from_pauli_transfer(t: &RMat) -> Result<Self> {
        if t.dims() != (VDIM, VDIM) {
            return Err(Error::Dimension { expected: "16x16", got: t.dims() });
        }
        let b = pauli_basis_matrix();
        Ok(SuperOp { mat: b.matmul(&t.to_complex()).matmul(&b.adjoint()) })
    }

    pub fn max_abs_diff(&self, other: &SuperOp) -> f64 {
        self.mat.max_abs_diff(&other.mat)
    }
}

/// Choi matrix, input factor first.
#[derive(Clone, Debug, PartialEq)]
pub struct ChoiMatrix {
    mat: CMat,
}

impl ChoiMatrix {
    pub fn matrix(&self) -> &CMat {
        &self.mat
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        hermitian_eigs(&self.mat)
    }

    /// `‖Tr_out J − 𝟙₄‖_max`.
    pub fn tp_deviation(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..DIM {
            for j in 0..DIM {
                let mut acc = c(0.0, 0.0);
                for a in 0..DIM {
                    acc += self.mat[(i * DIM + a, j * DIM + a)];
                }
                let want = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((acc - c(want, 0.0)).norm());
            }
        }
        worst
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CptpVerdict {
    pub cptp: bool,
    pub min_choi_eigenvalue: f64,
    pub tp_deviation: f64,
}

/// Complete positivity and trace preservation via the Choi matrix.
pub fn is_cptp(s: &SuperOp, tol: f64) -> Result<CptpVerdict> {
    let choi = s.choi();
    let herm = choi.matrix().hermiticity_defect();
    if herm > tol {
        // Not even Hermiticity preserving.
        return Ok(CptpVerdict {
            cptp: false,
            min_choi_eigenvalue: f64::NEG_INFINITY,
            tp_deviation: choi.tp_deviation(),
        });
    }
    let sym = (choi.matrix() + &choi.matrix().adjoint()).scaled(c(0.5, 0.0));
    let min = hermitian_eigs(&sym)?[0];
    let tp = choi.tp_deviation();
    Ok(CptpVerdict { cptp: min >= -tol && tp <= tol, min_choi_eigenvalue: min, tp_deviation: tp })
}

/// `𝒟₁(X) = (X_A⊗𝟙 + 𝟙⊗X_B − X) / 3` on any 4×4 operator.
pub fn d1(x: &CMat) -> CMat {
    let xa = partial_trace(x, Party::A).expect("4x4 input");
    let xb = partial_trace(x, Party::B).expect("4x4 input");
    let id = CMat::identity(2);
    let s = &(&xa.kron(&id) + &id.kron(&xb)) - x;
    s.scaled(c(1.0 / 3.0, 0.0))
}

/// `𝒟₂(X) = (4 Tr[X] 𝟙⊗𝟙 − 2 X_A⊗𝟙 − 2 𝟙⊗X_B + X) / 9` on any 4×4 operator.
///
/// On states `Tr[X] = 1`; the trace factor keeps the map linear.
pub fn d2(x: &CMat) -> CMat {
    let xa = partial_trace(x, Party::A).expect("4x4 input");
    let xb = partial_trace(x, Party::B).expect("4x4 input");
    let id = CMat::identity(2);
    let mut s = CMat::identity(4).scaled(x.trace() * 4.0);
    s = &s - &xa.kron(&id).scaled(c(2.0, 0.0));
    s = &s - &id.kron(&xb).scaled(c(2.0, 0.0));
    s = &s + x;
    s.scaled(c(1.0 / 9.0, 0.0))
}

pub fn map_d1(rho: &DensityMatrix) -> DensityMatrix {
    DensityMatrix::new_unchecked(d1(rho.mat()))
}

pub fn map_d2(rho: &DensityMatrix) -> DensityMatrix {
    DensityMatrix::new_unchecked(d2(rho.mat()))
}

/// Weights of `a·id + b·𝒟₁ + c·𝒟₂`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AbcParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

pub const ABC_NORM_TOL: f64 = 1e-12;

impl AbcParams {
    /// Checks `a + b + c = 1`. Negative weights are allowed (non-CP points).
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        let p = AbcParams { a, b, c };
        p.check_normalized()?;
        Ok(p)
    }

    /// The constant map `ρ ↦ 𝟙/4`.
    pub const TOTAL_DEPOLARIZER: AbcParams = AbcParams { a: 1.0 / 16.0, b: 3.0 / 8.0, c: 9.0 / 16.0 };
    pub const IDENTITY: AbcParams = AbcParams { a: 1.0, b: 0.0, c: 0.0 };

    fn check_normalized(&self) -> Result<()> {
        let s = self.a + self.b + self.c;
        if (s - 1.0).abs() > ABC_NORM_TOL {
            return Err(Error::InvalidParams(format!("a + b + c = {s} != 1")));
        }
        Ok(())
    }

    pub fn is_cp(&self) -> bool {
        self.a >= 0.0 && self.b >= 0.0 && self.c >= 0.0
    }
}

/// Scalings of the single-party (`f1`) and cross (`f2`) Pauli coefficients.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TransferFactors {
    pub f1: f64,
    pub f2: f64,
}

/// Images of the simplex vertices id, 𝒟₁, 𝒟₂.
pub const TRIANGLE: [(f64, f64); 3] = [(1.0, 1.0), (1.0 / 3.0, -1.0 / 3.0), (-1.0 / 3.0, 1.0 / 9.0)];

impl TransferFactors {
    /// Inverts [`transfer_factors`]: the unique normalized `(a, b, c)` with these factors.
    pub fn to_abc(&self) -> AbcParams {
        let [(x1, y1), (x2, y2), (x3, y3)] = TRIANGLE;
        let det = (y2 - y3) * (x1 - x3) + (x3 - x2) * (y1 - y3);
        let a = ((y2 - y3) * (self.f1 - x3) + (x3 - x2) * (self.f2 - y3)) / det;
        let b = ((y3 - y1) * (self.f1 - x3) + (x1 - x3) * (self.f2 - y3)) / det;
        AbcParams { a, b, c: 1.0 - a - b }
    }

    pub fn in_cp_triangle(&self, tol: f64) -> bool {
        let p = self.to_abc();
        p.a >= -tol && p.b >= -tol && p.c >= -tol
    }
}

pub fn transfer_factors(p: &AbcParams) -> Result<TransferFactors> {
    p.check_normalized()?;
    Ok(TransferFactors { f1: p.a + (p.b - p.c) / 3.0, f2: p.a - p.b / 3.0 + p.c / 9.0 })
}

/// The superoperator `a·id + b·𝒟₁ + c·𝒟₂`.
pub fn family_indep(p: &AbcParams) -> Result<SuperOp> {
    p.check_normalized()?;
    let (a, b, cc) = (p.a, p.b, p.c);
    Ok(SuperOp::from_map(move |x| {
        let mut out = x.scaled(c(a, 0.0));
        out = &out + &d1(x).scaled(c(b, 0.0));
        &out + &d2(x).scaled(c(cc, 0.0))
    }))
}
