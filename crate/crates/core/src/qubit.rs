//! Two-qubit seed states, local SU(2) signal encoding, and Pauli-coefficient
//! bookkeeping.
//!
//! Seeds follow a fixed gauge: single-party marginals are diagonal in the
//! σz basis, `ρ_A = ρ_B = ½(𝟙 + η σz)`. Arbitrary states can still be held
//! in a [`DensityMatrix`], but no re-gauging rotation is provided.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::{Error, Result};
use crate::linalg::{c, hermitian_eigs, partial_trace, CMat, Party, C64};

/// Tolerance for Hermiticity and unit trace of a [`DensityMatrix`].
pub const STATE_TOL: f64 = 1e-12;
/// Smallest eigenvalue accepted as "nonnegative".
pub const PSD_TOL: f64 = 1e-10;
/// Slack on the closed-form seed eigenvalues; boundary states are valid.
pub const SEED_TIE_TOL: f64 = 1e-12;

/// Single-qubit Pauli matrices, with `|0⟩` the σz = +1 eigenstate.
pub mod pauli {
    use crate::linalg::{c, CMat};

    pub fn id() -> CMat {
        CMat::identity(2)
    }

    pub fn x() -> CMat {
        CMat::from_vec(2, 2, vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)])
    }

    pub fn y() -> CMat {
        CMat::from_vec(2, 2, vec![c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)])
    }

    pub fn z() -> CMat {
        CMat::from_vec(2, 2, vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)])
    }

    /// `σ_μ` for μ = 0 (identity), 1 (x), 2 (y), 3 (z).
    pub fn sigma(mu: usize) -> CMat {
        match mu {
            0 => id(),
            1 => x(),
            2 => y(),
            3 => z(),
            _ => panic!("Pauli index out of range: {mu}"),
        }
    }

    /// `σ_μ ⊗ σ_ν`.
    pub fn pair(mu: usize, nu: usize) -> CMat {
        sigma(mu).kron(&sigma(nu))
    }
}

/// Two-qubit SWAP.
pub fn swap() -> CMat {
    let mut s = CMat::zeros(4, 4);
    for i in 0..2 {
        for j in 0..2 {
            s[(2 * i + j, 2 * j + i)] = c(1.0, 0.0);
        }
    }
    s
}

/// Singlet `|Ψ⁻⟩ = (|01⟩ − |10⟩)/√2`.
pub fn singlet() -> [C64; 4] {
    [c(0.0, 0.0), c(FRAC_1_SQRT_2, 0.0), c(-FRAC_1_SQRT_2, 0.0), c(0.0, 0.0)]
}

/// Triplet state `|Ψ⁺⟩ = (|01⟩ + |10⟩)/√2`.
pub fn triplet_zero() -> [C64; 4] {
    [c(0.0, 0.0), c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0), c(0.0, 0.0)]
}

pub fn singlet_projector() -> CMat {
    let s = singlet();
    CMat::outer(&s, &s)
}

/// Projector onto the symmetric (triplet) subspace.
pub fn symmetric_projector() -> CMat {
    &CMat::identity(4) - &singlet_projector()
}

/// A validated two-qubit (or, for the cloning module, any-size) density matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix(CMat);

impl DensityMatrix {
    /// Checks Hermiticity, unit trace and positivity.
    pub fn new(mat: CMat) -> Result<Self> {
        if !mat.is_square() {
            return Err(Error::Dimension { expected: "square", got: mat.dims() });
        }
        let herm = mat.hermiticity_defect();
        if herm > STATE_TOL {
            return Err(Error::InvalidState(format!("not Hermitian (defect {herm:.3e})")));
        }
        let tr = mat.trace();
        if (tr - c(1.0, 0.0)).norm() > STATE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} is not 1")));
        }
        let min = hermitian_eigs(&mat)?[0];
        if min < -PSD_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:.3e}")));
        }
        Ok(DensityMatrix(mat))
    }

    /// Wraps a matrix already known to be a state.
    pub(crate) fn new_unchecked(mat: CMat) -> Self {
        DensityMatrix(mat)
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        DensityMatrix(CMat::identity(dim).scaled(c(1.0 / dim as f64, 0.0)))
    }

    pub fn mat(&self) -> &CMat {
        &self.0
    }

    pub fn into_mat(self) -> CMat {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    /// Reduced state of one party (two-qubit states only).
    pub fn reduced(&self, keep: Party) -> Result<CMat> {
        partial_trace(&self.0, keep)
    }

    pub fn spectrum(&self) -> Vec<f64> {
        hermitian_eigs(&self.0).expect("density matrices are Hermitian")
    }

    /// `ρ_A ⊗ ρ_B` for a two-qubit state.
    pub fn product_of_marginals(&self) -> Result<CMat> {
        Ok(self.reduced(Party::A)?.kron(&self.reduced(Party::B)?))
    }
}

/// Coefficients of `ρ = ¼ Σ c[μ][ν] σ_μ ⊗ σ_ν`, indices 0, x, y, z.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PauliCoeffs(pub [[f64; 4]; 4]);

impl PauliCoeffs {
    pub fn get(&self, mu: usize, nu: usize) -> f64 {
        self.0[mu][nu]
    }

    /// Bloch vector of party A.
    pub fn bloch_a(&self) -> [f64; 3] {
        [self.0[1][0], self.0[2][0], self.0[3][0]]
    }

    /// Bloch vector of party B.
    pub fn bloch_b(&self) -> [f64; 3] {
        [self.0[0][1], self.0[0][2], self.0[0][3]]
    }

    /// The 3×3 correlation tensor `c[j][k]`, j, k ∈ {x, y, z}.
    pub fn correlations(&self) -> [[f64; 3]; 3] {
        let mut t = [[0.0; 3]; 3];
        for (j, row) in t.iter_mut().enumerate() {
            for (k, v) in row.iter_mut().enumerate() {
                *v = self.0[j + 1][k + 1];
            }
        }
        t
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut worst = 0.0f64;
        for mu in 0..4 {
            for nu in 0..4 {
                worst = worst.max((self.0[mu][nu] - other.0[mu][nu]).abs());
            }
        }
        worst
    }
}

/// `c[μ][ν] = Tr[ρ (σ_μ ⊗ σ_ν)]` for any 4×4 operator (real part taken).
pub fn pauli_decompose(rho: &CMat) -> PauliCoeffs {
    assert_eq!(rho.dims(), (4, 4), "pauli_decompose needs a 4x4 operator");
    let mut out = [[0.0; 4]; 4];
    for (mu, row) in out.iter_mut().enumerate() {
        for (nu, v) in row.iter_mut().enumerate() {
            *v = rho.matmul(&pauli::pair(mu, nu)).trace().re;
        }
    }
    PauliCoeffs(out)
}

/// Inverse of [`pauli_decompose`].
pub fn pauli_reconstruct(coeffs: &PauliCoeffs) -> CMat {
    let mut m = CMat::zeros(4, 4);
    for mu in 0..4 {
        for nu in 0..4 {
            let w = coeffs.0[mu][nu];
            if w != 0.0 {
                m = &m + &pauli::pair(mu, nu).scaled(c(0.25 * w, 0.0));
            }
        }
    }
    m
}

/// `Tr[ρ σz]` of a single-qubit state.
pub fn bloch_length_z(rho1: &CMat) -> f64 {
    rho1.matmul(&pauli::z()).trace().re
}

/// Bloch vector of a single-qubit operator.
pub fn bloch_vector(rho1: &CMat) -> [f64; 3] {
    [1, 2, 3].map(|k| rho1.matmul(&pauli::sigma(k)).trace().re)
}

/// Seed for independent signals:
/// `ρ = ¼[𝟙⊗𝟙 + η(σz⊗𝟙 + 𝟙⊗σz) − λ σz⊗σz]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeedIndep {
    pub eta: f64,
    pub lam: f64,
}

impl SeedIndep {
    pub fn new(eta: f64, lam: f64) -> Result<Self> {
        let s = SeedIndep { eta, lam };
        s.validate()?;
        Ok(s)
    }

    /// Diagonal entries in the computational basis (they are the eigenvalues).
    pub fn eigenvalues(&self) -> [f64; 4] {
        let (eta, lam) = (self.eta, self.lam);
        [(1.0 + 2.0 * eta - lam) / 4.0, (1.0 + lam) / 4.0, (1.0 + lam) / 4.0, (1.0 - 2.0 * eta - lam) / 4.0]
    }

    pub fn validate(&self) -> Result<()> {
        if !self.eta.is_finite() || !self.lam.is_finite() {
            return Err(Error::InvalidSeed("non-finite parameter".into()));
        }
        if self.lam > 1.0 + SEED_TIE_TOL {
            return Err(Error::InvalidSeed(format!("lambda = {} > 1", self.lam)));
        }
        let min = self.eigenvalues().into_iter().fold(f64::INFINITY, f64::min);
        if min < -SEED_TIE_TOL {
            return Err(Error::InvalidSeed(format!(
                "(eta, lambda) = ({}, {}) gives eigenvalue {min:.3e} < 0",
                self.eta, self.lam
            )));
        }
        Ok(())
    }
}

/// Seed for identical signals: `ρ = p|Ψ⁻⟩⟨Ψ⁻| + (1 − p) ρ_sym(η, λ)` with
/// `ρ_sym = ¼[𝟙⊗𝟙 + η(σz⊗𝟙 + 𝟙⊗σz) + ½(1+λ)(σx⊗σx + σy⊗σy) − λ σz⊗σz]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeedSym {
    pub p: f64,
    pub eta: f64,
    pub lam: f64,
}

impl SeedSym {
    pub fn new(p: f64, eta: f64, lam: f64) -> Result<Self> {
        let s = SeedSym { p, eta, lam };
        s.validate()?;
        Ok(s)
    }

    /// Eigenvalues of `ρ_sym` on |00⟩, |Ψ⁺⟩, |11⟩ (its singlet weight is zero).
    pub fn sym_eigenvalues(&self) -> [f64; 3] {
        let (eta, lam) = (self.eta, self.lam);
        [(1.0 + 2.0 * eta - lam) / 4.0, (1.0 + lam) / 2.0, (1.0 - 2.0 * eta - lam) / 4.0]
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.p.is_finite() && self.eta.is_finite() && self.lam.is_finite()) {
            return Err(Error::InvalidSeed("non-finite parameter".into()));
        }
        if self.p < -SEED_TIE_TOL || self.p > 1.0 + SEED_TIE_TOL {
            return Err(Error::InvalidSeed(format!("singlet weight p = {} outside [0, 1]", self.p)));
        }
        if self.lam > 1.0 + SEED_TIE_TOL {
            return Err(Error::InvalidSeed(format!("lambda = {} > 1", self.lam)));
        }
        let min = self.sym_eigenvalues().into_iter().fold(f64::INFINITY, f64::min);
        if min < -SEED_TIE_TOL {
            return Err(Error::InvalidSeed(format!(
                "rho_sym(eta = {}, lambda = {}) has eigenvalue {min:.3e} < 0",
                self.eta, self.lam
            )));
        }
        Ok(())
    }

    /// Bloch length of the seed's marginals, `(1 − p) η`.
    pub fn marginal_length(&self) -> f64 {
        (1.0 - self.p) * self.eta
    }
}

fn indep_coeffs(eta: f64, lam: f64) -> PauliCoeffs {
    let mut k = [[0.0; 4]; 4];
    k[0][0] = 1.0;
    k[3][0] = eta;
    k[0][3] = eta;
    k[3][3] = -lam;
    PauliCoeffs(k)
}

fn sym_coeffs(eta: f64, lam: f64) -> PauliCoeffs {
    let mut k = indep_coeffs(eta, lam).0;
    k[1][1] = 0.5 * (1.0 + lam);
    k[2][2] = 0.5 * (1.0 + lam);
    PauliCoeffs(k)
}

/// Builds the independent-signal seed.
pub fn seed_indep(s: SeedIndep) -> Result<DensityMatrix> {
    s.validate()?;
    Ok(DensityMatrix::new_unchecked(pauli_reconstruct(&indep_coeffs(s.eta, s.lam))))
}

/// Builds the identical-signal seed.
pub fn seed_sym(s: SeedSym) -> Result<DensityMatrix> {
    s.validate()?;
    let sym = pauli_reconstruct(&sym_coeffs(s.eta, s.lam));
    let m = &singlet_projector().scaled(c(s.p, 0.0)) + &sym.scaled(c(1.0 - s.p, 0.0));
    Ok(DensityMatrix::new_unchecked(m))
}

/// Reads `(p, η, λ)` back off a singlet/triplet block-diagonal state in the σz gauge.
pub fn sym_params_of(rho: &DensityMatrix) -> Result<SeedSym> {
    let m = rho.mat();
    if m.dims() != (4, 4) {
        return Err(Error::Dimension { expected: "4x4", got: m.dims() });
    }
    let s = singlet();
    let p = s
        .iter()
        .enumerate()
        .fold(c(0.0, 0.0), |acc, (i, a)| acc + (0..4).fold(c(0.0, 0.0), |acc2, j| acc2 + a.conj() * m[(i, j)] * s[j]));
    let p = p.re;
    if (1.0 - p).abs() < 1e-12 {
        return Ok(SeedSym { p: 1.0, eta: 0.0, lam: 0.0 });
    }
    let sym = (m - &singlet_projector().scaled(c(p, 0.0))).scaled(c(1.0 / (1.0 - p), 0.0));
    let k = pauli_decompose(&sym);
    Ok(SeedSym { p, eta: k.get(3, 0), lam: -k.get(3, 3) })
}

/// Axis-angle parameters of `U = cos(θ/2) 𝟙 + i sin(θ/2) n̂·σ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Su2Params {
    pub axis: [f64; 3],
    pub angle: f64,
}

impl Su2Params {
    pub const IDENTITY: Su2Params = Su2Params { axis: [0.0, 0.0, 1.0], angle: 0.0 };

    pub fn new(axis: [f64; 3], angle: f64) -> Result<Self> {
        let norm = axis.iter().map(|x| x * x).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::NonUnitAxis(norm));
        }
        Ok(Su2Params { axis, angle })
    }

    pub fn unitary(&self) -> CMat {
        let (s, co) = (0.5 * self.angle).sin_cos();
        let mut u = CMat::identity(2).scaled(c(co, 0.0));
        for (k, &n) in self.axis.iter().enumerate() {
            u = &u + &pauli::sigma(k + 1).scaled(c(0.0, s * n));
        }
        u
    }
}

/// `(U_A ⊗ U_B) ρ (U_A ⊗ U_B)†`.
pub fn encode(rho: &DensityMatrix, ua: &Su2Params, ub: &Su2Params) -> Result<DensityMatrix> {
    let ua = Su2Params::new(ua.axis, ua.angle)?;
    let ub = Su2Params::new(ub.axis, ub.angle)?;
    let u = ua.unitary().kron(&ub.unitary());
    Ok(DensityMatrix::new_unchecked(rho.mat().conjugate_by(&u)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn seed_indep_examples() {
        let r = seed_indep(SeedIndep { eta: 0.0, lam: 0.0 }).unwrap();
        assert!(r.mat().max_abs_diff(DensityMatrix::maximally_mixed(4).mat()) < 1e-15);

        let r = seed_indep(SeedIndep { eta: 0.3, lam: 0.3 }).unwrap();
        let want = CMat::diag(&[c(0.325, 0.0), c(0.325, 0.0), c(0.325, 0.0), c(0.025, 0.0)]);
        assert!(r.mat().max_abs_diff(&want) < 1e-15);

        assert!(matches!(seed_indep(SeedIndep { eta: 0.5, lam: 0.3 }), Err(Error::InvalidSeed(_))));
    }

    #[test]
    fn seed_indep_marginals() {
        let r = seed_indep(SeedIndep { eta: 0.3, lam: 0.3 }).unwrap();
        let want = &CMat::identity(2).scaled(c(0.5, 0.0)) + &pauli::z().scaled(c(0.15, 0.0));
        assert!(r.reduced(Party::A).unwrap().max_abs_diff(&want) < 1e-15);
        assert!(r.reduced(Party::B).unwrap().max_abs_diff(&want) < 1e-15);
    }

    #[test]
    fn seed_sym_examples() {
        let r = seed_sym(SeedSym { p: 1.0, eta: 0.1, lam: 0.2 }).unwrap();
        assert!(r.mat().max_abs_diff(&singlet_projector()) < 1e-15);

        let r = seed_sym(SeedSym { p: 0.0, eta: 0.0, lam: 1.0 }).unwrap();
        let t = triplet_zero();
        assert!(r.mat().max_abs_diff(&CMat::outer(&t, &t)) < 1e-15);

        let r = seed_sym(SeedSym { p: 0.0, eta: 2.0 / 3.0, lam: -1.0 / 3.0 }).unwrap();
        let k = pauli_decompose(r.mat());
        for (mu, nu, v) in [(1, 1, 1.0 / 3.0), (2, 2, 1.0 / 3.0), (3, 3, 1.0 / 3.0), (3, 0, 2.0 / 3.0)] {
            assert!((k.get(mu, nu) - v).abs() < 1e-12, "c[{mu}][{nu}] = {}", k.get(mu, nu));
        }
        assert!(DensityMatrix::new(r.mat().clone()).is_ok());
    }

    #[test]
    fn pauli_examples() {
        let k = pauli_decompose(DensityMatrix::maximally_mixed(4).mat());
        let mut want = [[0.0; 4]; 4];
        want[0][0] = 1.0;
        assert!(k.max_abs_diff(&PauliCoeffs(want)) < 1e-15);

        let k = pauli_decompose(seed_indep(SeedIndep { eta: 0.3, lam: 0.3 }).unwrap().mat());
        assert!((k.get(3, 0) - 0.3).abs() < 1e-15);
        assert!((k.get(0, 3) - 0.3).abs() < 1e-15);
        assert!((k.get(3, 3) + 0.3).abs() < 1e-15);
    }

    #[test]
    fn bloch_examples() {
        let r = &CMat::identity(2).scaled(c(0.5, 0.0)) + &pauli::z().scaled(c(0.35, 0.0));
        assert!((bloch_length_z(&r) - 0.7).abs() < 1e-15);
        assert_eq!(bloch_length_z(&CMat::identity(2).scaled(c(0.5, 0.0))), 0.0);
    }

    #[test]
    fn encode_flips_marginal() {
        let r = seed_indep(SeedIndep { eta: 0.3, lam: 0.3 }).unwrap();
        let same = encode(&r, &Su2Params::IDENTITY, &Su2Params::IDENTITY).unwrap();
        assert!(same.mat().max_abs_diff(r.mat()) < 1e-15);
        let flip = Su2Params::new([1.0, 0.0, 0.0], PI).unwrap();
        let out = encode(&r, &flip, &Su2Params::IDENTITY).unwrap();
        let ra = out.reduced(Party::A).unwrap();
        assert!((bloch_length_z(&ra) + 0.3).abs() < 1e-12);
        assert!((bloch_length_z(&out.reduced(Party::B).unwrap()) - 0.3).abs() < 1e-12);
    }

    #[test]
    fn encode_rejects_bad_axis() {
        let r = DensityMatrix::maximally_mixed(4);
        let bad = Su2Params { axis: [1.0, 1.0, 0.0], angle: 0.1 };
        assert!(matches!(encode(&r, &bad, &Su2Params::IDENTITY), Err(Error::NonUnitAxis(_))));
    }

    #[test]
    fn boundary_seed_has_zero_eigenvalue() {
        for lam in [-1.0, -0.5, 0.0, 0.4, 0.9] {
            let eta = (1.0 - lam) / 2.0;
            let r = seed_indep(SeedIndep { eta, lam }).unwrap();
            assert!(r.spectrum()[0].abs() < 1e-12);
        }
    }

    #[test]
    fn density_matrix_validation() {
        assert!(DensityMatrix::new(CMat::identity(4)).is_err());
        assert!(DensityMatrix::new(pauli::z().scaled(c(0.5, 0.0))).is_err());
        let neg = CMat::diag(&[c(1.5, 0.0), c(-0.5, 0.0)]);
        assert!(DensityMatrix::new(neg).is_err());
    }

    #[test]
    fn sym_params_round_trip() {
        let s = SeedSym { p: 0.3, eta: 0.2, lam: 0.1 };
        let got = sym_params_of(&seed_sym(s).unwrap()).unwrap();
        assert!((got.p - 0.3).abs() < 1e-14 && (got.eta - 0.2).abs() < 1e-14 && (got.lam - 0.1).abs() < 1e-14);
    }

    fn unit(v: [f64; 3]) -> [f64; 3] {
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt().max(1e-9);
        v.map(|x| x / n)
    }

    prop_compose! {
        fn seed_params()(lam in -1.0f64..1.0, t in -1.0f64..1.0) -> (f64, f64) {
            (t * (1.0 - lam) / 2.0, lam)
        }
    }

    prop_compose! {
        fn su2()(x in -1.0f64..1.0, y in -1.0f64..1.0, z in 0.1f64..1.0, th in 0.0..(4.0 * PI)) -> Su2Params {
            Su2Params::new(unit([x, y, z]), th).unwrap()
        }
    }

    proptest! {
        #[test]
        fn seeds_commute_with_swap((eta, lam) in seed_params(), p in 0.0f64..1.0) {
            let sw = swap();
            for r in [seed_indep(SeedIndep { eta, lam }).unwrap(), seed_sym(SeedSym { p, eta, lam }).unwrap()] {
                let comm = &r.mat().matmul(&sw) - &sw.matmul(r.mat());
                prop_assert!(comm.norm_max() < 1e-12);
            }
        }

        #[test]
        fn seed_sym_block_diagonal((eta, lam) in seed_params(), p in 0.0f64..1.0) {
            let r = seed_sym(SeedSym { p, eta, lam }).unwrap();
            let ps = singlet_projector();
            let pt = symmetric_projector();
            prop_assert!(ps.matmul(r.mat()).matmul(&pt).norm_max() < 1e-12);
            prop_assert!(DensityMatrix::new(r.mat().clone()).is_ok());
        }

        #[test]
        fn pauli_round_trip((eta, lam) in seed_params(), ua in su2(), ub in su2()) {
            let r = encode(&seed_indep(SeedIndep { eta, lam }).unwrap(), &ua, &ub).unwrap();
            let back = pauli_reconstruct(&pauli_decompose(r.mat()));
            prop_assert!(back.max_abs_diff(r.mat()) < 1e-12);
        }

        #[test]
        fn encode_preserves_spectrum_and_is_covariant((eta, lam) in seed_params(), ua in su2(), ub in su2()) {
            let r = seed_indep(SeedIndep { eta, lam }).unwrap();
            let out = encode(&r, &ua, &ub).unwrap();
            for (a, b) in r.spectrum().iter().zip(out.spectrum()) {
                prop_assert!((a - b).abs() < 1e-12);
            }
            let u = ua.unitary();
            let want = r.reduced(Party::A).unwrap().conjugate_by(&u);
            prop_assert!(out.reduced(Party::A).unwrap().max_abs_diff(&want) < 1e-12);
            prop_assert!((out.mat().trace().re - 1.0).abs() < 1e-12);
        }
    }
}
