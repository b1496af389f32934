//! Channels covariant under `U ⊗ U` built from Clebsch-Gordan couplings
//! between the singlet (j = 0) and triplet (j = 1) sectors.
//!
//! `T_{j,l,J}(X) = (2j+1)/(2J+1) · Σ_m A_m P_j X P_j A_m†` with
//! `A_m = Σ_{μ,M} ⟨J M | j μ; l m⟩ |J,M⟩⟨j,μ|`. The prefactor makes each
//! `T_{j,l,J}` trace preserving on its input sector, so the weights obey one
//! normalization per input sector. Singlet/triplet coherences are discarded,
//! which is harmless on the block-diagonal states this family is used for.

use std::f64::consts::FRAC_1_SQRT_2;

use super::cg::clebsch_gordan;
use super::SuperOp;
use crate::error::{Error, Result};
use crate::linalg::{c, CMat, C64};

/// Order of the six `(j, l, J)` triples in [`SixParams`].
pub const SIX_INDEX: [(i64, i64, i64); 6] = [(0, 0, 0), (0, 1, 1), (1, 1, 0), (1, 0, 1), (1, 1, 1), (1, 2, 1)];

const TP_TOL: f64 = 1e-10;
const NEG_TOL: f64 = 1e-12;

/// `|j, M⟩` in the computational basis (`|0⟩` is spin up).
fn spin_ket(j: i64, m: i64) -> [C64; 4] {
    let z = c(0.0, 0.0);
    let h = FRAC_1_SQRT_2;
    match (j, m) {
        (0, 0) => [z, c(h, 0.0), c(-h, 0.0), z],
        (1, 1) => [c(1.0, 0.0), z, z, z],
        (1, 0) => [z, c(h, 0.0), c(h, 0.0), z],
        (1, -1) => [z, z, z, c(1.0, 0.0)],
        _ => panic!("no two-qubit spin state |{j},{m}>"),
    }
}

fn sector_projector(j: i64) -> CMat {
    let mut p = CMat::zeros(4, 4);
    for m in -j..=j {
        let k = spin_ket(j, m);
        p = &p + &CMat::outer(&k, &k);
    }
    p
}

/// `T_{j,l,J}` as a superoperator.
pub fn sector_map(j: i64, l: i64, big_j: i64) -> SuperOp {
    let weight = (2 * j + 1) as f64 / (2 * big_j + 1) as f64;
    let proj = sector_projector(j);
    let kraus: Vec<CMat> = (-l..=l)
        .map(|m| {
            let mut a = CMat::zeros(4, 4);
            for mu in -j..=j {
                for big_m in -big_j..=big_j {
                    let w = clebsch_gordan(j, mu, l, m, big_j, big_m);
                    if w != 0.0 {
                        a = &a + &CMat::outer(&spin_ket(big_j, big_m), &spin_ket(j, mu)).scaled(c(w, 0.0));
                    }
                }
            }
            a
        })
        .collect();
    SuperOp::from_map(|x| {
        let block = proj.matmul(x).matmul(&proj);
        let mut out = CMat::zeros(4, 4);
        for a in &kraus {
            out = &out + &block.conjugate_by(a);
        }
        out.scaled(c(weight, 0.0))
    })
}

/// Weights `s_{j,l,J}` ordered as [`SIX_INDEX`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SixParams(pub [f64; 6]);

impl SixParams {
    /// Checks nonnegativity and the two per-sector normalizations.
    pub fn new(s: [f64; 6]) -> Result<Self> {
        let p = SixParams(s);
        p.validate()?;
        Ok(p)
    }

    pub const IDENTITY: SixParams = SixParams([1.0, 0.0, 0.0, 1.0, 0.0, 0.0]);

    /// Deviations of the singlet-input and triplet-input normalizations.
    pub fn tp_defects(&self) -> [f64; 2] {
        let s = &self.0;
        [s[0] + s[1] - 1.0, s[2] + s[3] + s[4] + s[5] - 1.0]
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(k) = self.0.iter().position(|&x| x.is_nan() || x < -NEG_TOL) {
            return Err(Error::InvalidParams(format!("weight s{:?} = {} is negative", SIX_INDEX[k], self.0[k])));
        }
        let d = self.tp_defects();
        if d[0].abs() > TP_TOL || d[1].abs() > TP_TOL {
            return Err(Error::InvalidParams(format!("trace-preservation defects {d:?}")));
        }
        Ok(())
    }

    pub fn get(&self, j: i64, l: i64, big_j: i64) -> f64 {
        SIX_INDEX.iter().position(|&t| t == (j, l, big_j)).map_or(0.0, |k| self.0[k])
    }
}

/// `Σ s_{j,l,J} T_{j,l,J}`.
pub fn family_identical(s: &SixParams) -> Result<SuperOp> {
    s.validate()?;
    let maps: Vec<SuperOp> = SIX_INDEX.iter().map(|&(j, l, jj)| sector_map(j, l, jj)).collect();
    let terms: Vec<(f64, &SuperOp)> = s.0.iter().copied().zip(maps.iter()).collect();
    Ok(SuperOp::combination(&terms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{commutant::SignalMode, covariance_residual, is_cptp};
    use crate::qubit::{seed_sym, singlet_projector, swap, symmetric_projector, DensityMatrix, SeedSym};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_six(rng: &mut ChaCha8Rng) -> SixParams {
        let u: f64 = rng.gen();
        let mut t: [f64; 4] = [rng.gen(), rng.gen(), rng.gen(), rng.gen()];
        let sum: f64 = t.iter().sum();
        t.iter_mut().for_each(|x| *x /= sum);
        SixParams::new([u, 1.0 - u, t[0], t[1], t[2], t[3]]).unwrap()
    }

    fn block_diagonal_state(rng: &mut ChaCha8Rng) -> CMat {
        let g = CMat::from_fn(4, 4, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let m = g.matmul(&g.adjoint());
        let (ps, pt) = (singlet_projector(), symmetric_projector());
        let m = &ps.matmul(&m).matmul(&ps) + &pt.matmul(&m).matmul(&pt);
        let tr = m.trace().re;
        m.scaled(c(1.0 / tr, 0.0))
    }

    #[test]
    fn identity_weights_act_as_identity() {
        let s = family_identical(&SixParams::IDENTITY).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..5 {
            let x = block_diagonal_state(&mut rng);
            assert!(s.apply(&x).max_abs_diff(&x) < 1e-14);
        }
    }

    #[test]
    fn triplet_to_singlet_coupling() {
        let t = sector_map(1, 1, 0);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let pt = symmetric_projector();
        for _ in 0..5 {
            let x = block_diagonal_state(&mut rng);
            let xt = pt.matmul(&x).matmul(&pt);
            let out = t.apply(&xt);
            let want = singlet_projector().scaled(xt.trace());
            assert!(out.max_abs_diff(&want) < 1e-14);
        }
    }

    #[test]
    fn each_sector_map_is_cptp_on_its_sector() {
        for &(j, l, jj) in &SIX_INDEX {
            let t = sector_map(j, l, jj);
            let p = sector_projector(j);
            let choi = t.choi();
            assert!(choi.matrix().is_hermitian(1e-12));
            let e = choi.eigenvalues().unwrap();
            assert!(e[0] > -1e-12, "T{:?} min Choi eig {}", (j, l, jj), e[0]);
            // Trace preserving on the input sector.
            let out = t.apply(&p);
            assert!((out.trace().re - p.trace().re).abs() < 1e-12);
        }
    }

    #[test]
    fn random_weights_are_cptp_and_covariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for k in 0..50 {
            let s = random_six(&mut rng);
            let map = family_identical(&s).unwrap();
            let v = is_cptp(&map, 1e-10).unwrap();
            assert!(v.cptp, "{s:?}: {v:?}");
            if k < 5 {
                assert!(covariance_residual(&map, SignalMode::Identical, 20, k as u64) < 1e-10);
            }
        }
    }

    #[test]
    fn output_on_cloner_point_is_swap_invariant_block_diagonal() {
        let rho = seed_sym(SeedSym { p: 0.0, eta: 2.0 / 3.0, lam: -1.0 / 3.0 }).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let sw = swap();
        for _ in 0..10 {
            let out = family_identical(&random_six(&mut rng)).unwrap().apply_state(&rho);
            assert!((&out.matmul(&sw) - &sw.matmul(&out)).norm_max() < 1e-12);
            assert!(singlet_projector().matmul(&out).matmul(&symmetric_projector()).norm_max() < 1e-12);
            assert!(DensityMatrix::new(out).is_ok());
        }
    }

    #[test]
    fn swap_covariance() {
        let sw = super::super::SuperOp::conjugation(&swap());
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..10 {
            let m = family_identical(&random_six(&mut rng)).unwrap();
            assert!(m.compose(&sw).max_abs_diff(&sw.compose(&m)) < 1e-10);
        }
    }

    #[test]
    fn rejects_bad_weights() {
        assert!(SixParams::new([1.0, 0.0, 0.5, 0.5, 0.5, 0.0]).is_err());
        assert!(SixParams::new([1.0, 0.0, -0.1, 1.1, 0.0, 0.0]).is_err());
        assert!(SixParams::new([0.25, 0.75, 0.25, 0.25, 0.25, 0.25]).is_ok());
    }
}
