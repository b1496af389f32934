//! Two-mode Gaussian states and decorrelation by random displacements.
//!
//! A state is `(mean, M)` where `M` is the correlation matrix of its
//! characteristic function, `Tr[ρ D(q)] = e^{iφ(mean, q)} e^{−½ qᵀMq}` with
//! `D(q) = D(q₁ + iq₂) ⊗ D(q₃ + iq₄)`. In this convention the vacuum has
//! `M = 𝟙`, a thermal mode with occupation `n̄` has `M = (2n̄+1)𝟙`, and the
//! uncertainty relation reads `M + iΩ ⪰ 0`.
//!
//! Averaging `D(x) ρ D(x)†` over Gaussian `x` with covariance `Σ` multiplies
//! the characteristic function by `E[e^{−2i qᵀΩx}]`, which adds
//! `R(Σ) = 4 Ω Σ Ωᵀ` to `M` and leaves the mean unchanged.

use crate::error::{Error, Result};
use crate::linalg::{c, eigh, RMat};

const SYM_TOL: f64 = 1e-12;
const HEISENBERG_TOL: f64 = 1e-10;
const THERMAL_TOL: f64 = 1e-9;

/// `Ω = ω ⊕ ω`, `ω = [[0, 1], [−1, 0]]`.
pub fn omega() -> RMat {
    let mut o = RMat::zeros(4, 4);
    for k in [0, 2] {
        o[(k, k + 1)] = 1.0;
        o[(k + 1, k)] = -1.0;
    }
    o
}

/// Smallest eigenvalue of the Hermitian matrix `M + iΩ`.
pub fn heisenberg_margin(m: &RMat) -> Result<f64> {
    let h = &m.to_complex() + &omega().to_complex().scaled(c(0.0, 1.0));
    Ok(eigh(&h)?.min())
}

/// `M + iΩ ⪰ 0` within tolerance.
pub fn heisenberg_valid(m: &RMat) -> bool {
    m.dims() == (4, 4) && m.symmetry_defect() <= SYM_TOL && heisenberg_margin(m).is_ok_and(|v| v >= -HEISENBERG_TOL)
}

#[derive(Clone, Debug, PartialEq)]
pub struct GaussianState {
    /// Displacement `(Re α, Im α, Re β, Im β)`.
    pub mean: [f64; 4],
    m: RMat,
}

impl GaussianState {
    pub fn new(mean: [f64; 4], m: RMat) -> Result<Self> {
        if m.dims() != (4, 4) {
            return Err(Error::Dimension { expected: "4x4", got: m.dims() });
        }
        let d = m.symmetry_defect();
        if d > SYM_TOL {
            return Err(Error::InvalidState(format!("correlation matrix not symmetric (defect {d:.3e})")));
        }
        let margin = heisenberg_margin(&m)?;
        if margin < -HEISENBERG_TOL {
            return Err(Error::NotHeisenberg(margin));
        }
        Ok(GaussianState { mean, m })
    }

    pub fn vacuum() -> Self {
        GaussianState { mean: [0.0; 4], m: RMat::identity(4) }
    }

    pub fn m(&self) -> &RMat {
        &self.m
    }

    /// Diagonal 2×2 block of mode `k ∈ {0, 1}`.
    pub fn block(&self, k: usize) -> [[f64; 2]; 2] {
        let o = 2 * k;
        [[self.m[(o, o)], self.m[(o, o + 1)]], [self.m[(o + 1, o)], self.m[(o + 1, o + 1)]]]
    }

    /// Off-diagonal 2×2 block `C` of `M = [[A, C], [Cᵀ, B]]`.
    pub fn cross_block(&self) -> [[f64; 2]; 2] {
        [[self.m[(0, 2)], self.m[(0, 3)]], [self.m[(1, 2)], self.m[(1, 3)]]]
    }

    pub fn is_product(&self, tol: f64) -> bool {
        self.cross_block().iter().flatten().all(|x| x.abs() <= tol)
    }

    /// Shifts the mean by `(Re α, Im α, Re β, Im β)`.
    pub fn displaced(&self, alpha: [f64; 2], beta: [f64; 2]) -> Self {
        let shift = [alpha[0], alpha[1], beta[0], beta[1]];
        GaussianState { mean: std::array::from_fn(|k| self.mean[k] + shift[k]), m: self.m.clone() }
    }
}

/// Two-mode squeezed vacuum with squeezing parameter `λ ∈ [0, 1)`.
pub fn twin_beam(lam: f64) -> Result<GaussianState> {
    if !(0.0..1.0).contains(&lam) {
        return Err(Error::InvalidArgument(format!("twin-beam parameter {lam} outside [0, 1)")));
    }
    let d = (1.0 + lam * lam) / (1.0 - lam * lam);
    let o = 2.0 * lam / (1.0 - lam * lam);
    let mut m = RMat::identity(4).scaled(d);
    for (i, s) in [(0, 1.0), (1, -1.0)] {
        m[(i, i + 2)] = -o * s;
        m[(i + 2, i)] = -o * s;
    }
    GaussianState::new([0.0; 4], m)
}

/// Symplectic eigenvalues `ν₁ ≤ ν₂` (each appears twice in the spectrum of `|iΩM|`).
/// Valid states have `ν ≥ 1`; pure states have `ν = 1`.
pub fn symplectic_eigenvalues(m: &RMat) -> Result<[f64; 2]> {
    let e = eigh(m)?;
    if e.min() <= 0.0 {
        return Err(Error::InvalidState("correlation matrix is not positive definite".into()));
    }
    let root =
        RMat::from_fn(4, 4, |i, j| (0..4).map(|k| e.vectors[(i, k)] * e.values[k].sqrt() * e.vectors[(j, k)]).sum());
    let h = root.matmul(&omega()).matmul(&root).to_complex().scaled(c(0.0, 1.0));
    let v = eigh(&h)?.values;
    Ok([v[2], v[3]])
}

/// Classical displacement covariance `Σ` and its inverse `G` (when it exists).
#[derive(Clone, Debug, PartialEq)]
pub struct NoiseSpec {
    sigma: RMat,
    g: Option<RMat>,
}

impl NoiseSpec {
    pub fn new(sigma: RMat) -> Result<Self> {
        if sigma.dims() != (4, 4) {
            return Err(Error::Dimension { expected: "4x4", got: sigma.dims() });
        }
        if sigma.symmetry_defect() > SYM_TOL {
            return Err(Error::InvalidParams("noise covariance not symmetric".into()));
        }
        let e = eigh(&sigma)?;
        let scale = e.max().abs().max(1.0);
        if e.min() < -1e-12 * scale {
            return Err(Error::InvalidParams(format!("noise covariance has eigenvalue {:.3e} < 0", e.min())));
        }
        let g = (e.min() > 1e-14 * scale).then(|| {
            RMat::from_fn(4, 4, |i, j| (0..4).map(|k| e.vectors[(i, k)] * e.vectors[(j, k)] / e.values[k]).sum())
        });
        Ok(NoiseSpec { sigma, g })
    }

    pub fn zero() -> Self {
        NoiseSpec { sigma: RMat::zeros(4, 4), g: None }
    }

    pub fn sigma(&self) -> &RMat {
        &self.sigma
    }

    /// Weight matrix `G = Σ⁻¹`; `None` for singular `Σ`.
    pub fn g(&self) -> Option<&RMat> {
        self.g.as_ref()
    }

    /// `R(Σ)`, the increment of `M`.
    pub fn added_noise(&self) -> RMat {
        noise_injection(&self.sigma)
    }
}

/// `R(Σ) = 4 Ω Σ Ωᵀ`.
pub fn noise_injection(sigma: &RMat) -> RMat {
    let o = omega();
    o.matmul(sigma).matmul(&o.transpose()).scaled(4.0)
}

/// `Σ` with `R(Σ) = N`.
pub fn noise_for_increment(n: &RMat) -> RMat {
    let o = omega();
    o.transpose().matmul(n).matmul(&o).scaled(0.25)
}

/// The covariant random-displacement channel.
pub fn apply_displacement_noise(state: &GaussianState, noise: &NoiseSpec) -> GaussianState {
    GaussianState { mean: state.mean, m: &state.m + &noise.added_noise() }
}

fn sigma_max_2x2(a: [[f64; 2]; 2]) -> f64 {
    // Largest eigenvalue of AᵀA, closed form.
    let p = a[0][0] * a[0][0] + a[1][0] * a[1][0];
    let q = a[0][1] * a[0][1] + a[1][1] * a[1][1];
    let r = a[0][0] * a[0][1] + a[1][0] * a[1][1];
    let mean = 0.5 * (p + q);
    let dev = (0.25 * (p - q) * (p - q) + r * r).sqrt();
    (mean + dev).sqrt()
}

/// Decorrelating noise with the smallest isotropic local part.
#[derive(Clone, Debug, PartialEq)]
pub struct NoiseSolution {
    pub noise: NoiseSpec,
    /// Local noise level `t = σ_max(C) + slack` on each diagonal block of `R(Σ)`.
    pub t: f64,
    /// `σ_max(C)`, the smallest admissible `t`.
    pub t_min: f64,
}

/// Noise cancelling the cross block `C` of `M`: `R(Σ) = [[t𝟙, −C], [−Cᵀ, t𝟙]]`,
/// which is PSD iff `t ≥ σ_max(C)`. `slack > 0` keeps `Σ` invertible.
pub fn solve_noise(state: &GaussianState, slack: f64) -> Result<NoiseSolution> {
    if !(slack > 0.0 && slack.is_finite()) {
        return Err(Error::InvalidArgument(format!("slack must be positive, got {slack}")));
    }
    let margin = heisenberg_margin(state.m())?;
    if margin < -HEISENBERG_TOL {
        return Err(Error::NotHeisenberg(margin));
    }
    let cb = state.cross_block();
    let t_min = sigma_max_2x2(cb);
    let t = t_min + slack;
    let n = cross_cancelling_increment(cb, t);
    Ok(NoiseSolution { noise: NoiseSpec::new(noise_for_increment(&n))?, t, t_min })
}

/// `[[t𝟙, −C], [−Cᵀ, t𝟙]]`.
pub fn cross_cancelling_increment(cb: [[f64; 2]; 2], t: f64) -> RMat {
    let mut n = RMat::identity(4).scaled(t);
    for i in 0..2 {
        for j in 0..2 {
            n[(i, j + 2)] = -cb[i][j];
            n[(j + 2, i)] = -cb[i][j];
        }
    }
    n
}

/// Mean photon number of a thermal mode: block `m𝟙` gives `n̄ = (m − 1)/2`.
pub fn marginal_occupation(state: &GaussianState, mode: usize) -> Result<f64> {
    if mode > 1 {
        return Err(Error::InvalidArgument(format!("mode index {mode} out of range")));
    }
    let b = state.block(mode);
    let m = 0.5 * (b[0][0] + b[1][1]);
    let dev = (b[0][0] - m).abs().max((b[1][1] - m).abs()).max(b[0][1].abs()).max(b[1][0].abs());
    if dev > THERMAL_TOL {
        return Err(Error::NotThermal(format!("mode {mode} block {b:?} is not isotropic")));
    }
    Ok(0.5 * (m - 1.0))
}

/// Difference between displacing then decorrelating and decorrelating then displacing.
pub fn displacement_covariance_check(state: &GaussianState, alpha: [f64; 2], beta: [f64; 2], noise: &NoiseSpec) -> f64 {
    let a = apply_displacement_noise(&state.displaced(alpha, beta), noise);
    let b = apply_displacement_noise(state, noise).displaced(alpha, beta);
    let dm = a.mean.iter().zip(&b.mean).fold(0.0f64, |acc, (x, y)| acc.max((x - y).abs()));
    dm.max(a.m.max_abs_diff(&b.m))
}

/// Noise increment `(2λ/(1−λ²)) [𝟙 + [[ε𝟙, σz], [σz, ε𝟙]]]` commonly quoted for
/// decorrelating the twin beam.
pub fn twin_beam_reference_noise(lam: f64, eps: f64) -> RMat {
    let k = 2.0 * lam / (1.0 - lam * lam);
    cross_cancelling_increment([[-k, 0.0], [0.0, k]], k * (1.0 + eps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{CMat, C64};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;

    // Truncated Fock-space displacement operator D(z) = exp(z a† − z* a).
    fn fock_displacement(z: C64, dim: usize) -> CMat {
        let mut gen = CMat::zeros(dim, dim);
        for n in 1..dim {
            let s = (n as f64).sqrt();
            gen[(n, n - 1)] = z * s; // z a†
            gen[(n - 1, n)] = -z.conj() * s; // −z* a
        }
        // gen is anti-Hermitian: gen = iH with H Hermitian.
        let h = gen.scaled(c(0.0, -1.0));
        let e = eigh(&h).unwrap();
        let phases: Vec<C64> = e.values.iter().map(|&l| C64::from_polar(1.0, l)).collect();
        e.vectors.matmul(&CMat::diag(&phases)).matmul(&e.vectors.adjoint())
    }

    fn vacuum_expectation(op: &CMat) -> C64 {
        op[(0, 0)]
    }

    #[test]
    fn characteristic_function_conventions() {
        let dim = 60;
        let q = [0.31, -0.22];
        let zq = c(q[0], q[1]);
        // Vacuum: e^{−|z|²/2} ⇒ M = 𝟙.
        let chi = vacuum_expectation(&fock_displacement(zq, dim));
        assert!((chi - c((-0.5 * (q[0] * q[0] + q[1] * q[1])).exp(), 0.0)).norm() < 1e-12);
        // Conjugation by D(x) multiplies by e^{−2i qᵀωx}.
        let x = [0.17, 0.41];
        let dx = fock_displacement(c(x[0], x[1]), dim);
        let lhs = vacuum_expectation(&dx.adjoint().matmul(&fock_displacement(zq, dim)).matmul(&dx));
        let q_omega_x = q[0] * x[1] - q[1] * x[0];
        let rhs = C64::from_polar(1.0, -2.0 * q_omega_x) * chi;
        assert!((lhs - rhs).norm() < 1e-10, "{lhs} vs {rhs}");
    }

    #[test]
    fn thermal_characteristic_function() {
        // Tr[ρ_th D(z)] = e^{−(n̄ + ½)|z|²} ⇒ M = (2n̄ + 1)𝟙.
        let (dim, nbar) = (80, 0.7);
        let zq = c(0.25, 0.1);
        let d = fock_displacement(zq, dim);
        let r = nbar / (1.0 + nbar);
        let chi: C64 = (0..dim).map(|n| d[(n, n)] * (1.0 - r) * r.powi(n as i32)).sum();
        let want = (-(nbar + 0.5) * zq.norm_sqr()).exp();
        assert!((chi - c(want, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn noise_injection_matches_quadrature() {
        // E_x[e^{−2i qᵀωx}] over x ~ N(0, Σ) by tensor-grid quadrature, single mode.
        let sigma = [[0.3, 0.1], [0.1, 0.2]];
        let det = sigma[0][0] * sigma[1][1] - sigma[0][1] * sigma[1][0];
        let inv = [[sigma[1][1] / det, -sigma[0][1] / det], [-sigma[1][0] / det, sigma[0][0] / det]];
        let q = [0.8, -0.5];
        let (n, half) = (400, 4.0);
        let h = 2.0 * half / n as f64;
        let mut acc = 0.0;
        for i in 0..=n {
            for j in 0..=n {
                let x = [-half + i as f64 * h, -half + j as f64 * h];
                let quad = x[0] * (inv[0][0] * x[0] + inv[0][1] * x[1]) + x[1] * (inv[1][0] * x[0] + inv[1][1] * x[1]);
                let w = (-0.5 * quad).exp() / (2.0 * std::f64::consts::PI * det.sqrt());
                acc += w * (2.0 * (q[0] * x[1] - q[1] * x[0])).cos() * h * h;
            }
        }
        let mut s4 = RMat::zeros(4, 4);
        for i in 0..2 {
            for j in 0..2 {
                s4[(i, j)] = sigma[i][j];
            }
        }
        let r = noise_injection(&s4);
        let qrq = q[0] * (r[(0, 0)] * q[0] + r[(0, 1)] * q[1]) + q[1] * (r[(1, 0)] * q[0] + r[(1, 1)] * q[1]);
        assert!((acc - (-0.5 * qrq).exp()).abs() < 1e-8, "{acc} vs {}", (-0.5 * qrq).exp());
    }

    #[test]
    fn isotropic_noise_on_vacuum_is_thermal() {
        let nbar = 0.4;
        // R(s𝟙) = 4s𝟙, so s = n̄/2 gives R = 2n̄𝟙.
        let noise = NoiseSpec::new(RMat::identity(4).scaled(nbar / 2.0)).unwrap();
        let out = apply_displacement_noise(&GaussianState::vacuum(), &noise);
        for mode in 0..2 {
            assert!((marginal_occupation(&out, mode).unwrap() - nbar).abs() < 1e-14);
        }
        let zero = apply_displacement_noise(&twin_beam(0.3).unwrap(), &NoiseSpec::zero());
        assert_eq!(zero, twin_beam(0.3).unwrap());
    }

    #[test]
    fn omega_properties() {
        let o = omega();
        assert_eq!(o.transpose(), o.scaled(-1.0));
        assert_eq!(o.matmul(&o), RMat::identity(4).scaled(-1.0));
    }

    #[test]
    fn heisenberg_examples() {
        assert!(heisenberg_valid(&RMat::identity(4)));
        assert!(!heisenberg_valid(&RMat::zeros(4, 4)));
        assert!(heisenberg_valid(twin_beam(0.99).unwrap().m()));
        assert!(heisenberg_margin(&RMat::identity(4)).unwrap().abs() < 1e-14);
        assert!(!heisenberg_valid(&RMat::identity(4).scaled(0.99)));
    }

    #[test]
    fn twin_beam_examples() {
        assert_eq!(twin_beam(0.0).unwrap().m(), &RMat::identity(4));
        let tb = twin_beam(0.5).unwrap();
        assert!((tb.block(0)[0][0] - 5.0 / 3.0).abs() < 1e-15 && tb.block(0)[0][1] == 0.0);
        assert_eq!(tb.cross_block(), [[-4.0 / 3.0, 0.0], [0.0, 4.0 / 3.0]]);
        let e = eigh(twin_beam(0.9).unwrap().m()).unwrap().values;
        for (got, want) in e.iter().zip([1.0 / 19.0, 1.0 / 19.0, 19.0, 19.0]) {
            assert!((got - want).abs() < 1e-12, "{e:?}");
        }
        assert!(twin_beam(1.0).is_err() && twin_beam(-0.1).is_err());
        let nu = symplectic_eigenvalues(tb.m()).unwrap();
        assert!((nu[0] - 1.0).abs() < 1e-12 && (nu[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn twin_beam_decorrelates_to_thermal_pair() {
        for lam in [0.3, 0.5, 0.9] {
            let slack = 1e-6;
            let tb = twin_beam(lam).unwrap();
            let sol = solve_noise(&tb, slack).unwrap();
            let out = apply_displacement_noise(&tb, &sol.noise);
            assert!(out.is_product(1e-10));
            assert!(heisenberg_valid(out.m()));
            let target = lam / (1.0 - lam);
            for mode in 0..2 {
                let nbar = marginal_occupation(&out, mode).unwrap();
                assert!((nbar - target - slack / 2.0).abs() < 1e-9, "{lam}: {nbar}");
            }
            assert!(sol.noise.g().is_some());
        }
    }

    #[test]
    fn occupation_increases_with_slack() {
        let tb = twin_beam(0.5).unwrap();
        let nbar = |s: f64| {
            marginal_occupation(&apply_displacement_noise(&tb, &solve_noise(&tb, s).unwrap().noise), 0).unwrap()
        };
        let values: Vec<f64> = [1e-6, 1e-4, 1e-2, 1.0].iter().map(|&s| nbar(s)).collect();
        assert!(values.windows(2).all(|w| w[1] > w[0]));
        assert!((values[0] - 1.0).abs() < 1e-6);
    }

    #[test]
    fn reference_noise_is_increment_not_weight() {
        for (lam, eps) in [(0.5, 0.1), (0.3, 0.01)] {
            let k = 2.0 * lam / (1.0 - lam * lam);
            let tb = twin_beam(lam).unwrap();
            let sol = solve_noise(&tb, eps * k).unwrap();
            let reference = twin_beam_reference_noise(lam, eps);
            // The quoted matrix is R(Σ) for slack εk ...
            assert!(sol.noise.added_noise().max_abs_diff(&reference) < 1e-12);
            // ... not the weight G = Σ⁻¹ ...
            assert!(sol.noise.g().unwrap().max_abs_diff(&reference) > 0.1);
            // ... and the resulting local noise exceeds (1+λ)/(1−λ) by εk, not ε.
            let out = apply_displacement_noise(&tb, &sol.noise);
            assert!((out.m()[(0, 0)] - ((1.0 + lam) / (1.0 - lam) + eps * k)).abs() < 1e-12);
        }
    }

    #[test]
    fn product_input_gets_slack_noise_only() {
        let mut m = RMat::identity(4).scaled(2.0);
        m[(0, 1)] = 0.3;
        m[(1, 0)] = 0.3;
        let st = GaussianState::new([0.1, 0.2, 0.3, 0.4], m).unwrap();
        let sol = solve_noise(&st, 1e-3).unwrap();
        assert_eq!(sol.t_min, 0.0);
        assert!(sol.noise.sigma().max_abs_diff(&RMat::identity(4).scaled(1e-3 / 4.0)) < 1e-15);
    }

    fn random_symplectic(rng: &mut ChaCha8Rng) -> RMat {
        let rot = |a: f64, i: usize, j: usize| {
            let mut r = RMat::identity(4);
            r[(i, i)] = a.cos();
            r[(j, j)] = a.cos();
            r[(i, j)] = a.sin();
            r[(j, i)] = -a.sin();
            r
        };
        let mut s = RMat::identity(4);
        for _ in 0..3 {
            let mut sq = RMat::identity(4);
            for k in [0, 2] {
                let r: f64 = rng.gen_range(0.5..2.0);
                sq[(k, k)] = r;
                sq[(k + 1, k + 1)] = 1.0 / r;
            }
            let a: f64 = rng.gen_range(0.0..6.3);
            // Same-angle mixing of (q1, q3) and (q2, q4) is a passive two-mode transformation.
            let bs = rot(a, 0, 2).matmul(&rot(a, 1, 3));
            s = s.matmul(&sq).matmul(&rot(rng.gen_range(0.0..6.3), 0, 1)).matmul(&bs);
        }
        s
    }

    fn random_state(rng: &mut ChaCha8Rng) -> GaussianState {
        let s = random_symplectic(rng);
        let nu: [f64; 2] = [rng.gen_range(1.0..2.0), rng.gen_range(1.0..2.0)];
        let d = RMat::diag(&[nu[0], nu[0], nu[1], nu[1]]);
        let m = s.matmul(&d).matmul(&s.transpose());
        let m = RMat::from_fn(4, 4, |i, j| 0.5 * (m[(i, j)] + m[(j, i)]));
        let mean = std::array::from_fn(|_| rng.sample(StandardNormal));
        GaussianState::new(mean, m).unwrap()
    }

    #[test]
    fn random_states_decorrelate_minimally() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let st = random_state(&mut rng);
            let sol = solve_noise(&st, 1e-6).unwrap();
            let out = apply_displacement_noise(&st, &sol.noise);
            assert!(out.is_product(1e-10));
            assert!(heisenberg_valid(out.m()));
            assert_eq!(out.mean, st.mean);
            // The injected noise is PSD, so no eigenvalue of M decreases.
            let added = sol.noise.added_noise();
            assert!(eigh(&added).unwrap().min() >= -1e-12);
            // Minimality: below σ_max(C) the increment has a negative eigenvalue.
            let below = cross_cancelling_increment(st.cross_block(), sol.t_min - 1e-6);
            assert!(eigh(&below).unwrap().min() < -5e-7);
            // Output occupations sit above the input's symplectic floor.
            let floor = 0.5 * (symplectic_eigenvalues(st.m()).unwrap()[0] - 1.0);
            for mode in 0..2 {
                let b = out.block(mode);
                let nbar_eff = 0.5 * ((b[0][0] * b[1][1] - b[0][1] * b[1][0]).sqrt() - 1.0);
                assert!(nbar_eff >= floor - 1e-12);
            }
        }
    }

    #[test]
    fn injection_is_linear() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..10 {
            let rand_psd = |rng: &mut ChaCha8Rng| {
                let a = RMat::from_fn(4, 4, |_, _| rng.gen_range(-1.0..1.0));
                a.matmul(&a.transpose())
            };
            let (s1, s2) = (rand_psd(&mut rng), rand_psd(&mut rng));
            let lhs = noise_injection(&(&s1 + &s2));
            let rhs = &noise_injection(&s1) + &noise_injection(&s2);
            assert!(lhs.max_abs_diff(&rhs) < 1e-12);
            assert!(noise_for_increment(&noise_injection(&s1)).max_abs_diff(&s1) < 1e-12);
        }
    }

    #[test]
    fn displacement_covariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let tb = twin_beam(0.6).unwrap();
        let noise = solve_noise(&tb, 1e-3).unwrap().noise;
        assert_eq!(displacement_covariance_check(&tb, [0.0; 2], [0.0; 2], &noise), 0.0);
        for _ in 0..10 {
            let a = [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)];
            let b = [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)];
            assert!(displacement_covariance_check(&tb, a, b, &noise) <= 1e-12);
            assert!(displacement_covariance_check(&tb, a, a, &noise) <= 1e-12);
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(GaussianState::new([0.0; 4], RMat::identity(4).scaled(0.5)), Err(Error::NotHeisenberg(_))));
        assert!(solve_noise(&GaussianState::vacuum(), 0.0).is_err());
        assert!(marginal_occupation(&twin_beam(0.5).unwrap(), 0).is_ok());
        let mut m = RMat::identity(4).scaled(2.0);
        m[(0, 0)] = 3.0;
        assert!(matches!(marginal_occupation(&GaussianState::new([0.0; 4], m).unwrap(), 0), Err(Error::NotThermal(_))));
        assert!(NoiseSpec::new(RMat::identity(4).scaled(-1.0)).is_err());
    }
}
