//! Covariance of superoperators under local SU(2) actions.
//!
//! The covariant subspace is computed from the Lie algebra: a superoperator
//! commutes with every `U`-conjugation of a connected group iff it commutes
//! with the generators `X ↦ i[H, X]`. In the Pauli transfer picture those
//! generators are real, so the linear constraints and their nullspace are
//! real as well (256 unknowns).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::SuperOp;
use crate::error::Result;
use crate::linalg::{c, nullspace, CMat, RMat, C64};
use crate::qubit::{pauli, swap, Su2Params};

/// How signals are encoded on the two qubits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SignalMode {
    /// `U(α) ⊗ U(β)`.
    Independent,
    /// `U(α) ⊗ U(α)`.
    Identical,
}

impl std::fmt::Display for SignalMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SignalMode::Independent => "independent",
            SignalMode::Identical => "identical",
        })
    }
}

impl std::str::FromStr for SignalMode {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "independent" => Ok(SignalMode::Independent),
            "identical" => Ok(SignalMode::Identical),
            other => Err(format!("unknown mode '{other}' (expected independent|identical)")),
        }
    }
}

const NULL_TOL: f64 = 1e-6;

/// Hamiltonians `H` whose commutators generate the covariance group.
fn generator_hamiltonians(mode: SignalMode) -> Vec<CMat> {
    let id = pauli::id();
    (1..4)
        .flat_map(|k| {
            let a = pauli::sigma(k).kron(&id);
            let b = id.kron(&pauli::sigma(k));
            match mode {
                SignalMode::Independent => vec![a, b],
                SignalMode::Identical => vec![&a + &b],
            }
        })
        .collect()
}

fn commutator_transfer(h: &CMat) -> RMat {
    let i = c(0.0, 1.0);
    SuperOp::from_map(|x| (&h.matmul(x) - &x.matmul(h)).scaled(i)).pauli_transfer()
}

/// Rows of `vec(T K − K T)` as a linear function of the row-major `vec(T)`.
fn commutation_rows(k: &RMat, out: &mut Vec<f64>) {
    let n = k.rows();
    for r in 0..n {
        for col in 0..n {
            let mut row = vec![0.0; n * n];
            for m in 0..n {
                row[r * n + m] += k[(m, col)];
                row[m * n + col] -= k[(r, m)];
            }
            out.extend(row);
        }
    }
}

/// Orthonormal basis of the covariant superoperators.
#[derive(Clone, Debug)]
pub struct CommutantBasis {
    pub basis: Vec<SuperOp>,
    /// Smallest singular value of the constraint system above the null threshold.
    pub sigma_gap: f64,
    /// Largest singular value treated as zero.
    pub sigma_null: f64,
}

impl CommutantBasis {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Basis of `{S : S ∘ K = K ∘ S}` for all generators `K` of the mode's group,
/// optionally also commuting with SWAP conjugation.
pub fn commutant_basis(mode: SignalMode, perm_invariant: bool) -> Result<CommutantBasis> {
    let mut gens: Vec<RMat> = generator_hamiltonians(mode).iter().map(commutator_transfer).collect();
    if perm_invariant {
        gens.push(SuperOp::conjugation(&swap()).pauli_transfer());
    }
    let n = 16;
    let mut data = Vec::with_capacity(gens.len() * n * n * n * n);
    for k in &gens {
        commutation_rows(k, &mut data);
    }
    let l = RMat::from_vec(gens.len() * n * n, n * n, data);
    let ns = nullspace(&l, NULL_TOL)?;
    let basis = ns
        .basis
        .iter()
        .map(|v| SuperOp::from_pauli_transfer(&RMat::from_vec(n, n, v.clone())))
        .collect::<Result<Vec<_>>>()?;
    Ok(CommutantBasis { basis, sigma_gap: ns.sigma_gap.unwrap_or(f64::INFINITY), sigma_null: ns.sigma_null })
}

fn flatten(s: &SuperOp) -> Vec<C64> {
    s.matrix().as_slice().to_vec()
}

fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn orthonormalize(vs: &[Vec<C64>]) -> Vec<Vec<C64>> {
    let mut out: Vec<Vec<C64>> = Vec::new();
    for v in vs {
        let mut w = v.clone();
        for _ in 0..2 {
            for q in &out {
                let p = dot(q, &w);
                w.iter_mut().zip(q).for_each(|(x, y)| *x -= p * y);
            }
        }
        let norm = dot(&w, &w).re.sqrt();
        if norm > 1e-12 {
            out.push(w.into_iter().map(|x| x / norm).collect());
        }
    }
    out
}

/// Sine of the largest principal angle between the spans of two families
/// (Frobenius geometry); 1 when the dimensions differ.
pub fn subspace_distance(a: &[SuperOp], b: &[SuperOp]) -> f64 {
    let qa = orthonormalize(&a.iter().map(flatten).collect::<Vec<_>>());
    let qb = orthonormalize(&b.iter().map(flatten).collect::<Vec<_>>());
    if qa.len() != qb.len() {
        return 1.0;
    }
    let residual = |v: &Vec<C64>, q: &[Vec<C64>]| {
        let mut w = v.clone();
        for u in q {
            let p = dot(u, &w);
            w.iter_mut().zip(u).for_each(|(x, y)| *x -= p * y);
        }
        dot(&w, &w).re.sqrt()
    };
    let ab = qa.iter().map(|v| residual(v, &qb)).fold(0.0, f64::max);
    let ba = qb.iter().map(|v| residual(v, &qa)).fold(0.0, f64::max);
    ab.max(ba)
}

/// Haar-random SU(2) element in axis-angle form (uniform unit quaternion).
pub fn haar_su2<R: Rng>(rng: &mut R) -> Su2Params {
    let q: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
    let norm = q.iter().map(|x| x * x).sum::<f64>().sqrt();
    let [w, x, y, z] = q.map(|v| v / norm);
    let vn = (x * x + y * y + z * z).sqrt();
    if vn < 1e-15 {
        return Su2Params::IDENTITY;
    }
    Su2Params { axis: [x / vn, y / vn, z / vn], angle: 2.0 * vn.atan2(w) }
}

pub(crate) fn random_density<R: Rng>(rng: &mut R, dim: usize) -> CMat {
    let g = CMat::from_fn(dim, dim, |_, _| c(rng.sample(StandardNormal), rng.sample(StandardNormal)));
    let m = g.matmul(&g.adjoint());
    let tr = m.trace().re;
    m.scaled(c(1.0 / tr, 0.0))
}

/// `max ‖S(UρU†) − U S(ρ) U†‖_max` over sampled group elements and states.
pub fn covariance_residual(s: &SuperOp, mode: SignalMode, n_samples: usize, rng_seed: u64) -> f64 {
    assert!(n_samples >= 1, "need at least one sample");
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut worst = 0.0f64;
    for _ in 0..n_samples {
        let ua = haar_su2(&mut rng).unitary();
        let ub = match mode {
            SignalMode::Independent => haar_su2(&mut rng).unitary(),
            SignalMode::Identical => ua.clone(),
        };
        let u = ua.kron(&ub);
        let rho = random_density(&mut rng, 4);
        let lhs = s.apply(&rho.conjugate_by(&u));
        let rhs = s.apply(&rho).conjugate_by(&u);
        worst = worst.max(lhs.max_abs_diff(&rhs));
    }
    worst
}
