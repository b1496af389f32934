//! Grids of optimal `η̃` over seed parameters.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use super::{solve_identical, solve_indep};
use crate::channels::SignalMode;
use crate::error::{Error, Result};
use crate::qubit::{SeedIndep, SeedSym};

/// `steps` equally spaced points from `lo` to `hi` inclusive.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Axis {
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
}

impl Axis {
    pub fn new(lo: f64, hi: f64, steps: usize) -> Result<Self> {
        if steps < 2 {
            return Err(Error::InvalidArgument(format!("grid needs at least 2 steps, got {steps}")));
        }
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::InvalidArgument(format!("bad range [{lo}, {hi}]")));
        }
        Ok(Axis { lo, hi, steps })
    }

    pub fn value(&self, k: usize) -> f64 {
        if k + 1 == self.steps {
            return self.hi;
        }
        self.lo + (self.hi - self.lo) * k as f64 / (self.steps - 1) as f64
    }

    pub fn spacing(&self) -> f64 {
        (self.hi - self.lo) / (self.steps - 1) as f64
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub mode: SignalMode,
    pub eta: Axis,
    pub lam: Axis,
    /// Singlet weight of identical-signal seeds; ignored for independent signals.
    pub p: f64,
}

impl GridSpec {
    /// `η ∈ [0, 1]`, `λ ∈ [−1, 1]`, `p = 0`.
    pub fn standard(mode: SignalMode, eta_steps: usize, lam_steps: usize) -> Result<Self> {
        Ok(GridSpec { mode, eta: Axis::new(0.0, 1.0, eta_steps)?, lam: Axis::new(-1.0, 1.0, lam_steps)?, p: 0.0 })
    }
}

/// Optimum at one valid grid point.
#[derive(Clone, Debug, PartialEq)]
pub struct CellValue {
    pub eta_tilde: f64,
    pub params: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepCell {
    pub eta: f64,
    pub lam: f64,
    /// `None` outside the state-validity region.
    pub value: Option<CellValue>,
}

/// Cells in row-major order: row `i` is `lam.value(i)`, column `j` is `eta.value(j)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepGrid {
    pub spec: GridSpec,
    pub cells: Vec<SweepCell>,
}

impl SweepGrid {
    pub fn cell(&self, lam_index: usize, eta_index: usize) -> &SweepCell {
        &self.cells[lam_index * self.spec.eta.steps + eta_index]
    }

    pub fn valid_count(&self) -> usize {
        self.cells.iter().filter(|c| c.value.is_some()).count()
    }
}

/// How grid cells are scheduled. Results are identical either way.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    /// Data-parallel over cells; falls back to sequential without the `parallel` feature.
    #[default]
    Parallel,
}

fn compute_cell(spec: &GridSpec, index: usize) -> Result<SweepCell> {
    let (i, j) = (index / spec.eta.steps, index % spec.eta.steps);
    let (eta, lam) = (spec.eta.value(j), spec.lam.value(i));
    let solved = match spec.mode {
        SignalMode::Independent => SeedIndep::new(eta, lam).ok().map(solve_indep),
        SignalMode::Identical => SeedSym::new(spec.p, eta, lam).ok().map(solve_identical),
    };
    let value = solved.transpose()?.map(|s| CellValue { eta_tilde: s.eta_tilde, params: s.params.values() });
    Ok(SweepCell { eta, lam, value })
}

/// Optimal `η̃` over the grid. Invalid seeds are flagged, not solved.
pub fn sweep(spec: &GridSpec, exec: Execution) -> Result<SweepGrid> {
    if spec.mode == SignalMode::Identical && !(0.0..=1.0).contains(&spec.p) {
        return Err(Error::InvalidArgument(format!("singlet weight p = {} outside [0, 1]", spec.p)));
    }
    let n = spec.eta.steps * spec.lam.steps;
    let cells: Result<Vec<SweepCell>> = match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => (0..n).into_par_iter().map(|k| compute_cell(spec, k)).collect(),
        _ => (0..n).map(|k| compute_cell(spec, k)).collect(),
    };
    Ok(SweepGrid { spec: *spec, cells: cells? })
}
