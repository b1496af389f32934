use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got:?}")]
    Dimension { expected: &'static str, got: (usize, usize) },

    #[error("matrix is not Hermitian (defect {0:.3e})")]
    NotHermitian(f64),

    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:.3e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("invalid seed: {0}")]
    InvalidSeed(String),

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("rotation axis is not a unit vector (norm {0})")]
    NonUnitAxis(f64),

    #[error("invalid channel parameters: {0}")]
    InvalidParams(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("state is not a thermal state: {0}")]
    NotThermal(String),

    #[error("Gaussian state violates the uncertainty relation (min eigenvalue {0:.3e})")]
    NotHeisenberg(f64),

    #[error("decorrelation solver failed: {0}")]
    Solver(String),
}

pub type Result<T> = std::result::Result<T, Error>;
