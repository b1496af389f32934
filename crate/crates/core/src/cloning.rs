//! Universal cloning and the Fourier-degree obstruction to decorrelating clones.
//!
//! For equatorial inputs `|φ⟩ = (|0⟩ + e^{iφ}|1⟩)/√2` every entry of
//! `(|φ⟩⟨φ|)^{⊗N}` is a trigonometric polynomial in `φ` of degree at most `N`,
//! and any linear map preserves that bound. A decorrelated `N → N+1` cloner
//! output `(η|φ⟩⟨φ| + (1−η)𝟙/2)^{⊗N+1}` has degree `N+1` whenever `η ≠ 0`,
//! so no channel can produce it.

use std::f64::consts::PI;

use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::linalg::{c, kron_all, CMat, C64};
use crate::qubit::{symmetric_projector, DensityMatrix};

const DEGREE_TOL: f64 = 1e-8;

/// `cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PureQubit {
    pub theta: f64,
    pub phi: f64,
}

impl PureQubit {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !(theta.is_finite() && phi.is_finite()) {
            return Err(Error::InvalidArgument("Bloch angles must be finite".into()));
        }
        Ok(PureQubit { theta, phi })
    }

    pub fn equatorial(phi: f64) -> Self {
        PureQubit { theta: PI / 2.0, phi }
    }

    pub fn ket(&self) -> [C64; 2] {
        let (s, co) = (0.5 * self.theta).sin_cos();
        [c(co, 0.0), C64::from_polar(s, self.phi)]
    }

    pub fn projector(&self) -> CMat {
        let k = self.ket();
        CMat::outer(&k, &k)
    }

    pub fn bloch(&self) -> [f64; 3] {
        let s = self.theta.sin();
        [s * self.phi.cos(), s * self.phi.sin(), self.theta.cos()]
    }
}

/// Output of the symmetric 1 → 2 universal cloner: `(2/3) P_sym (ρ⊗𝟙) P_sym`.
pub fn uqcm(psi: &PureQubit) -> DensityMatrix {
    let ps = symmetric_projector();
    let out = ps.matmul(&psi.projector().kron(&CMat::identity(2))).matmul(&ps);
    DensityMatrix::new(out.scaled(c(2.0 / 3.0, 0.0))).expect("cloner output is a state")
}

#[derive(Clone, Debug, PartialEq)]
pub struct DegreeReport {
    pub n_inputs: usize,
    pub input_degree: usize,
    pub target_degree: usize,
    /// `target_degree > input_degree`: no linear map reaches the target.
    pub obstruction: bool,
    /// Shrink factors of the target's single-copy factors.
    pub etas: Vec<f64>,
}

/// Largest `|f|` with a Fourier coefficient above threshold, over all matrix
/// entries of `family(φ_k)`, `φ_k = 2πk/K`.
fn fourier_degree(samples: usize, family: impl Fn(f64) -> CMat) -> usize {
    let mats: Vec<CMat> = (0..samples).map(|k| family(2.0 * PI * k as f64 / samples as f64)).collect();
    let (rows, cols) = mats[0].dims();
    let fft = FftPlanner::<f64>::new().plan_fft_forward(samples);
    let mut degree = 0;
    let mut buf = vec![C64::new(0.0, 0.0); samples];
    for i in 0..rows {
        for j in 0..cols {
            buf.iter_mut().zip(&mats).for_each(|(b, m)| *b = m[(i, j)]);
            fft.process(&mut buf);
            for (bin, v) in buf.iter().enumerate() {
                if v.norm() / samples as f64 > DEGREE_TOL {
                    degree = degree.max(bin.min(samples - bin));
                }
            }
        }
    }
    degree
}

fn noisy_copy(phi: f64, eta: f64) -> CMat {
    let p = PureQubit::equatorial(phi).projector();
    &p.scaled(c(eta, 0.0)) + &CMat::identity(2).scaled(c(0.5 * (1.0 - eta), 0.0))
}

fn check_eta(eta: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::InvalidArgument(format!("eta = {eta} outside [0, 1]")));
    }
    Ok(())
}

fn report(n: usize, etas: &[f64]) -> DegreeReport {
    // Degrees never exceed N + 1, so 2N + 5 samples resolve them without aliasing.
    let samples = 2 * n + 5;
    let input_degree = fourier_degree(samples, |phi| {
        let p = PureQubit::equatorial(phi).projector();
        kron_all(&vec![p; n])
    });
    let target_degree =
        fourier_degree(samples, |phi| kron_all(&etas.iter().map(|&e| noisy_copy(phi, e)).collect::<Vec<_>>()));
    DegreeReport {
        n_inputs: n,
        input_degree,
        target_degree,
        obstruction: target_degree > input_degree,
        etas: etas.to_vec(),
    }
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("need at least one input copy".into()));
    }
    Ok(())
}

/// Degrees for `N` inputs against the symmetric target with shrink `η` on all `N + 1` outputs.
pub fn fourier_degree_report(n: usize, eta: f64) -> Result<DegreeReport> {
    check_n(n)?;
    check_eta(eta)?;
    Ok(report(n, &vec![eta; n + 1]))
}

/// Degrees for `N` inputs against an asymmetric target with per-output shrinks.
pub fn asymmetric_degree_report(etas: &[f64], n: usize) -> Result<DegreeReport> {
    check_n(n)?;
    if etas.len() != n + 1 {
        return Err(Error::InvalidArgument(format!("expected {} shrink factors, got {}", n + 1, etas.len())));
    }
    for &e in etas {
        check_eta(e)?;
    }
    Ok(report(n, etas))
}
