//! Maximal-purity decorrelation of two-qubit seeds.
//!
//! A covariant channel `𝒟` decorrelates a seed when
//! `𝒟(ρ) = ρ̃ ⊗ ρ̃` with `ρ̃ = ½(𝟙 + η̃ σz)`; the solvers maximize `η̃`.
//! The output marginal keeps the sign of the seed's Bloch vector, so
//! negative `η` is handled by symmetry and `η̃` is always reported ≥ 0.

mod nnls;
mod sweep;

use std::sync::OnceLock;

use crate::channels::{family_identical, family_indep, sector_map, AbcParams, SixParams, SuperOp, SIX_INDEX, TRIANGLE};
use crate::error::{Error, Result};
use crate::linalg::{c, CMat, RMat};
use crate::qubit::{pauli, pauli_decompose, seed_indep, seed_sym, swap, DensityMatrix, SeedIndep, SeedSym};

pub use nnls::{nnls, Nnls};
pub use sweep::{sweep, Axis, CellValue, Execution, GridSpec, SweepCell, SweepGrid};

/// `η̃` at or below this is reported as trivial decorrelation.
pub const TRIVIAL_ETA: f64 = 1e-6;
/// Acceptance threshold on the 2-norm of the Pauli-coefficient residual in
/// the identical-signal feasibility test.
pub const FEASIBILITY_TOL: f64 = 1e-13;
const BISECTION_STEPS: usize = 60;
const EDGE_TOL: f64 = 1e-12;

/// Parameters of the channel attached to a [`Solution`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ChannelParams {
    Abc(AbcParams),
    Six(SixParams),
}

impl ChannelParams {
    pub fn channel(&self) -> Result<SuperOp> {
        match self {
            ChannelParams::Abc(p) => family_indep(p),
            ChannelParams::Six(s) => family_identical(s),
        }
    }

    /// `[a, b, c]` or the six weights in `SIX_INDEX` order.
    pub fn values(&self) -> Vec<f64> {
        match self {
            ChannelParams::Abc(p) => vec![p.a, p.b, p.c],
            ChannelParams::Six(s) => s.0.to_vec(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Solution {
    /// Bloch length of each output marginal.
    pub eta_tilde: f64,
    pub params: ChannelParams,
    /// `η̃ > 0` was achieved.
    pub feasible_nontrivial: bool,
    /// `‖𝒟(ρ) − ρ̃⊗ρ̃‖_max` on the seed.
    pub residual: f64,
}

/// `[½(𝟙 + η̃ σz)]^{⊗2}`.
pub fn product_target(eta_tilde: f64) -> CMat {
    let m = &pauli::id() + &pauli::z().scaled(c(eta_tilde, 0.0));
    let m = m.scaled(c(0.5, 0.0));
    m.kron(&m)
}

fn finish(rho: &DensityMatrix, eta: f64, eta_tilde: f64, params: ChannelParams) -> Result<Solution> {
    let out = params.channel()?.apply(rho.mat());
    let residual = out.max_abs_diff(&product_target(eta.signum() * eta_tilde));
    Ok(Solution { eta_tilde, params, feasible_nontrivial: eta_tilde > 0.0, residual })
}

fn quadratic_roots(qa: f64, qb: f64, qc: f64) -> Vec<f64> {
    let scale = qa.abs().max(qb.abs()).max(qc.abs());
    if scale == 0.0 {
        return Vec::new();
    }
    if qa.abs() <= 1e-15 * scale {
        return if qb == 0.0 { Vec::new() } else { vec![-qc / qb] };
    }
    let mut disc = qb * qb - 4.0 * qa * qc;
    if disc < 0.0 {
        if disc < -1e-14 * (qb * qb).max((4.0 * qa * qc).abs()) {
            return Vec::new();
        }
        disc = 0.0;
    }
    let q = -0.5 * (qb + qb.signum() * disc.sqrt());
    if q == 0.0 {
        return vec![0.0];
    }
    vec![q / qa, qc / q]
}

/// Largest `η̃ = f1·|η|` with `η̃² = −λ f2` and `(f1, f2)` in the CP triangle,
/// together with its `(a, b, c)`. Pure geometry: `(η, λ)` is not checked
/// against the state-validity region. Returns the total depolarizer with
/// `η̃ = 0` when no nontrivial point exists.
pub fn indep_optimum(eta: f64, lam: f64) -> (f64, AbcParams) {
    let e = eta.abs();
    if e == 0.0 || lam == 0.0 {
        return (0.0, AbcParams::TOTAL_DEPOLARIZER);
    }
    // The condition is the parabola f2 = κ f1².
    let kappa = -e * e / lam;
    let unit = |k: usize| {
        let mut w = [0.0; 3];
        w[k] = 1.0;
        w
    };
    let mut best: Option<(f64, [f64; 3])> = None;
    for (i, j) in [(0, 1), (1, 2), (2, 0)] {
        let (p, q) = (TRIANGLE[i], TRIANGLE[j]);
        let d = (q.0 - p.0, q.1 - p.1);
        let roots = quadratic_roots(kappa * d.0 * d.0, 2.0 * kappa * p.0 * d.0 - d.1, kappa * p.0 * p.0 - p.1);
        for t in roots {
            if !(-EDGE_TOL..=1.0 + EDGE_TOL).contains(&t) {
                continue;
            }
            let t = t.clamp(0.0, 1.0);
            let f1 = p.0 + t * d.0;
            if f1 > 0.0 && best.is_none_or(|(b, _)| f1 > b) {
                let (wi, wj) = (unit(i), unit(j));
                best = Some((f1, std::array::from_fn(|k| (1.0 - t) * wi[k] + t * wj[k])));
            }
        }
    }
    match best {
        Some((f1, w)) => (f1 * e, AbcParams { a: w[0], b: w[1], c: w[2] }),
        None => (0.0, AbcParams::TOTAL_DEPOLARIZER),
    }
}

/// Optimal decorrelation of an independent-signal seed within `a·id + b·𝒟₁ + c·𝒟₂`.
pub fn solve_indep(seed: SeedIndep) -> Result<Solution> {
    let rho = seed_indep(seed)?;
    let (eta_tilde, p) = indep_optimum(seed.eta, seed.lam);
    finish(&rho, seed.eta, eta_tilde, ChannelParams::Abc(p))
}

/// Optimal decorrelation of an arbitrary SWAP-invariant two-qubit state with
/// marginals along z, within `a·id + b·𝒟₁ + c·𝒟₂`.
///
/// The family scales the marginal Bloch vector `r` by `f1` and the
/// correlation tensor `C` by `f2`, so a product output needs `f2 C = f1² r rᵀ`.
/// Unless `C` is proportional to `r rᵀ` this forces `f1 = 0`.
pub fn solve_indep_state(rho: &DensityMatrix) -> Result<Solution> {
    if rho.dim() != 4 {
        return Err(Error::Dimension { expected: "4x4", got: rho.mat().dims() });
    }
    let m = rho.mat();
    let sw = swap();
    let asym = (&m.matmul(&sw) - &sw.matmul(m)).norm_max();
    if asym > 1e-10 {
        return Err(Error::InvalidState(format!("state is not permutation invariant (defect {asym:.3e})")));
    }
    let k = pauli_decompose(m);
    let r = k.bloch_a();
    if r[0].abs() > 1e-12 || r[1].abs() > 1e-12 {
        return Err(Error::InvalidState("marginal Bloch vectors must lie along z".into()));
    }
    let eta = r[2];
    let corr = k.correlations();
    let seed_form = (0..3).all(|i| (0..3).all(|j| (i == 2 && j == 2) || corr[i][j].abs() <= 1e-12));
    let (eta_tilde, p) = if seed_form { indep_optimum(eta, -corr[2][2]) } else { (0.0, AbcParams::TOTAL_DEPOLARIZER) };
    finish(rho, eta, eta_tilde, ChannelParams::Abc(p))
}

fn sector_maps() -> &'static [SuperOp; 6] {
    static MAPS: OnceLock<[SuperOp; 6]> = OnceLock::new();
    MAPS.get_or_init(|| SIX_INDEX.map(|(j, l, jj)| sector_map(j, l, jj)))
}

fn coeff_vector(x: &CMat) -> Vec<f64> {
    pauli_decompose(x).0.iter().flatten().copied().collect()
}

/// Linear feasibility data `A s = b(η̃)` for the identical-signal family on one seed:
/// sixteen Pauli-coefficient rows plus the two per-sector normalizations.
#[derive(Clone, Debug)]
pub struct IdenticalProblem {
    pub matrix: RMat,
    sign: f64,
}

impl IdenticalProblem {
    pub fn new(rho: &DensityMatrix, eta_sign: f64) -> Self {
        let cols: Vec<Vec<f64>> = sector_maps().iter().map(|t| coeff_vector(&t.apply(rho.mat()))).collect();
        let mut matrix = RMat::from_fn(18, 6, |i, k| if i < 16 { cols[k][i] } else { 0.0 });
        for k in 0..6 {
            matrix[(16 + usize::from(k >= 2), k)] = 1.0;
        }
        IdenticalProblem { matrix, sign: if eta_sign < 0.0 { -1.0 } else { 1.0 } }
    }

    pub fn rhs(&self, eta_tilde: f64) -> Vec<f64> {
        let mut b = coeff_vector(&product_target(self.sign * eta_tilde));
        b.extend([1.0, 1.0]);
        b
    }

    pub fn feasibility(&self, eta_tilde: f64) -> Nnls {
        nnls(&self.matrix, &self.rhs(eta_tilde))
    }

    pub fn is_feasible(&self, eta_tilde: f64) -> bool {
        self.feasibility(eta_tilde).residual <= FEASIBILITY_TOL
    }
}

/// Six weights sending every two-qubit state to `𝟙/4`: each input sector goes
/// a quarter to the singlet and three quarters to the flat triplet, which on
/// triplet inputs is `Σ_l (2l+1)/9 T_{1,l,1}`.
pub const SIX_DEPOLARIZER: [f64; 6] = [0.25, 0.75, 0.25, 0.75 / 9.0, 0.75 * 3.0 / 9.0, 0.75 * 5.0 / 9.0];

fn six_from(x: &[f64]) -> Result<SixParams> {
    SixParams::new(std::array::from_fn(|k| x[k].max(0.0)))
}

/// Optimal decorrelation of an identical-signal seed within the six-weight family,
/// by bisection on `η̃` with a nonnegative least-squares feasibility test.
pub fn solve_identical(seed: SeedSym) -> Result<Solution> {
    let rho = seed_sym(seed)?;
    let problem = IdenticalProblem::new(&rho, seed.eta);
    let hi = seed.marginal_length().abs();
    let mut best = 0.0;
    if hi > 0.0 {
        if problem.is_feasible(hi) {
            best = hi;
        } else {
            let (mut lo, mut up) = (0.0, hi);
            for _ in 0..BISECTION_STEPS {
                let mid = 0.5 * (lo + up);
                if problem.is_feasible(mid) {
                    lo = mid;
                } else {
                    up = mid;
                }
            }
            best = lo;
        }
    }
    if best <= TRIVIAL_ETA {
        best = 0.0;
    }
    if best == 0.0 {
        // Near-parallel columns can stall the active-set search here; the
        // depolarizer needs no search.
        return finish(&rho, seed.eta, 0.0, ChannelParams::Six(SixParams::new(SIX_DEPOLARIZER)?));
    }
    let fit = problem.feasibility(best);
    if fit.residual > FEASIBILITY_TOL {
        return Err(Error::Solver(format!(
            "no feasible weights at eta_tilde = {best} (residual {:.3e})",
            fit.residual
        )));
    }
    finish(&rho, seed.eta, best, ChannelParams::Six(six_from(&fit.x)?))
}

/// True when no single linear map can send `ρ1`, `ρ2` and their mixture each
/// to the product of its own marginals: both parties' marginals must differ,
/// and the mixture of the two products must differ from the product of the
/// mixture's marginals.
pub fn convexity_obstruction(rho1: &DensityMatrix, rho2: &DensityMatrix, mix: f64) -> Result<bool> {
    if !(mix > 0.0 && mix < 1.0) {
        return Err(Error::InvalidArgument(format!("mix = {mix} must lie in (0, 1)")));
    }
    use crate::linalg::Party;
    const TOL: f64 = 1e-9;
    let differs = |party| -> Result<bool> { Ok(rho1.reduced(party)?.max_abs_diff(&rho2.reduced(party)?) > TOL) };
    if !(differs(Party::A)? && differs(Party::B)?) {
        return Ok(false);
    }
    let w = c(mix, 0.0);
    let v = c(1.0 - mix, 0.0);
    let forced = &rho1.product_of_marginals()?.scaled(w) + &rho2.product_of_marginals()?.scaled(v);
    let mixture = DensityMatrix::new(&rho1.mat().scaled(w) + &rho2.mat().scaled(v))?;
    Ok(forced.max_abs_diff(&mixture.product_of_marginals()?) > TOL)
}
