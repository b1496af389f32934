//! Command-line front end: grid sweeps, single solves, cloning and Gaussian reports.
//!
//! Exit codes: 0 on success, 1 on invalid input, 2 when an output file cannot be written.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use decorr::channels::{SignalMode, SIX_INDEX};
use decorr::cloning::{fourier_degree_report, uqcm, PureQubit};
use decorr::gaussian::{
    apply_displacement_noise, marginal_occupation, solve_noise, twin_beam, twin_beam_reference_noise,
};
use decorr::linalg::RMat;
use decorr::qubit::{sym_params_of, SeedIndep, SeedSym};
use decorr::solver::{solve_identical, solve_indep, sweep, ChannelParams, Execution, GridSpec, Solution};

pub mod output;

pub use output::{csv_string, fmt_sig, parse_pgm, pgm_string, render_pgm, write_csv};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error("write failed: {0}")]
    Write(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => 1,
            CliError::Write(_) => 2,
        }
    }
}

impl From<decorr::Error> for CliError {
    fn from(e: decorr::Error) -> Self {
        CliError::Invalid(e.to_string())
    }
}

/// Accepts decimals and fractions such as `2/3` or `-1/3`.
pub fn parse_number(s: &str) -> Result<f64, String> {
    let s = s.trim();
    let v = match s.split_once('/') {
        Some((n, d)) => {
            let n: f64 = n.trim().parse().map_err(|_| format!("bad numerator in '{s}'"))?;
            let d: f64 = d.trim().parse().map_err(|_| format!("bad denominator in '{s}'"))?;
            if d == 0.0 {
                return Err(format!("zero denominator in '{s}'"));
            }
            n / d
        }
        None => s.parse().map_err(|_| format!("'{s}' is not a number"))?,
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("'{s}' is not finite"))
    }
}

fn parse_positive(s: &str) -> Result<f64, String> {
    let v = parse_number(s)?;
    if v > 0.0 {
        Ok(v)
    } else {
        Err(format!("expected a positive value, got {v}"))
    }
}

fn parse_steps(s: &str) -> Result<usize, String> {
    let n: usize = s.parse().map_err(|_| format!("'{s}' is not a step count"))?;
    if n >= 2 {
        Ok(n)
    } else {
        Err(format!("need at least 2 steps, got {n}"))
    }
}

#[derive(Debug, Parser)]
#[command(name = "decorr", version, about = "Decorrelation of bipartite quantum states")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Optimal η̃ over an (η, λ) grid, written as CSV and optionally PGM.
    QubitSweep(SweepArgs),
    /// Optimal decorrelation of a single seed.
    QubitSolve(SolveArgs),
    /// Universal-cloner point and Fourier-degree obstruction for N → N+1 clones.
    CloneCheck(CloneArgs),
    /// Minimal-noise decorrelation of a twin beam.
    Gauss(GaussArgs),
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_parser = clap::value_parser!(SignalMode))]
    pub mode: SignalMode,
    #[arg(long, default_value = "51", value_parser = parse_steps)]
    pub eta_steps: usize,
    #[arg(long = "lambda-steps", default_value = "51", value_parser = parse_steps)]
    pub lam_steps: usize,
    /// Singlet weight (identical mode).
    #[arg(long, default_value = "0", value_parser = parse_number, allow_hyphen_values = true)]
    pub p: f64,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub pgm: Option<PathBuf>,
    /// Compute cells on one thread.
    #[arg(long)]
    pub sequential: bool,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long, value_parser = clap::value_parser!(SignalMode))]
    pub mode: SignalMode,
    #[arg(long, value_parser = parse_number, allow_hyphen_values = true)]
    pub eta: f64,
    #[arg(long = "lambda", value_parser = parse_number, allow_hyphen_values = true)]
    pub lam: f64,
    #[arg(long, default_value = "0", value_parser = parse_number, allow_hyphen_values = true)]
    pub p: f64,
    /// Largest reduction of |η| used to pull a slightly invalid seed onto the state boundary.
    #[arg(long, default_value = "1e-5", value_parser = parse_positive)]
    pub seed_tol: f64,
}

#[derive(Debug, Args)]
pub struct CloneArgs {
    #[arg(long, default_value = "4")]
    pub max_n: usize,
    #[arg(long, default_value = "2/3", value_parser = parse_number, allow_hyphen_values = true)]
    pub eta: f64,
}

#[derive(Debug, Args)]
pub struct GaussArgs {
    #[arg(long = "lambda", value_parser = parse_number, allow_hyphen_values = true)]
    pub lam: f64,
    #[arg(long, default_value = "1e-6", value_parser = parse_positive)]
    pub slack: f64,
}

/// Parses `argv` (program name first), runs the subcommand and returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = if code == 0 { write!(out, "{e}") } else { write!(err, "{e}") };
            return code;
        }
    };
    match execute(&cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn io(e: std::io::Error) -> CliError {
    CliError::Write(e.to_string())
}

pub fn execute(cmd: &Command, out: &mut dyn Write) -> Result<(), CliError> {
    match cmd {
        Command::QubitSweep(a) => qubit_sweep(a, out),
        Command::QubitSolve(a) => qubit_solve(a, out),
        Command::CloneCheck(a) => clone_check(a, out),
        Command::Gauss(a) => gauss(a, out),
    }
}

fn qubit_sweep(a: &SweepArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let mut spec = GridSpec::standard(a.mode, a.eta_steps, a.lam_steps)?;
    spec.p = a.p;
    let exec = if a.sequential { Execution::Sequential } else { Execution::Parallel };
    let grid = sweep(&spec, exec)?;
    write_csv(&grid, &a.out)?;
    if let Some(path) = &a.pgm {
        render_pgm(&grid, path)?;
    }
    writeln!(out, "cells={} valid={} csv={}", grid.cells.len(), grid.valid_count(), a.out.display()).map_err(io)?;
    Ok(())
}

/// Largest `|η'| ≤ |η|` accepted by `valid`, if it is within `tol` of `|η|`.
fn clamp_eta(eta: f64, tol: f64, valid: impl Fn(f64) -> bool) -> Option<f64> {
    if valid(eta) {
        return Some(eta);
    }
    let sign = if eta < 0.0 { -1.0 } else { 1.0 };
    let floor = (eta.abs() - tol).max(0.0);
    if !valid(sign * floor) {
        return None;
    }
    let (mut lo, mut hi) = (floor, eta.abs());
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if valid(sign * mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(sign * lo)
}

fn print_params(params: &ChannelParams, out: &mut dyn Write) -> std::io::Result<()> {
    match params {
        ChannelParams::Abc(p) => writeln!(out, "a={},b={},c={}", fmt_sig(p.a), fmt_sig(p.b), fmt_sig(p.c)),
        ChannelParams::Six(s) => {
            let items: Vec<String> =
                SIX_INDEX.iter().zip(s.0).map(|((j, l, jj), v)| format!("s{j}{l}{jj}={}", fmt_sig(v))).collect();
            writeln!(out, "{}", items.join(","))
        }
    }
}

fn report_solution(sol: &Solution, out: &mut dyn Write) -> std::io::Result<()> {
    writeln!(out, "eta_tilde={}", fmt_sig(sol.eta_tilde))?;
    print_params(&sol.params, out)?;
    writeln!(out, "residual={:.3e}", sol.residual)?;
    writeln!(out, "verdict={}", if sol.feasible_nontrivial { "DECORRELABLE" } else { "NON-DECORRELABLE" })
}

fn qubit_solve(a: &SolveArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let clamped = match a.mode {
        SignalMode::Independent => clamp_eta(a.eta, a.seed_tol, |e| SeedIndep::new(e, a.lam).is_ok()),
        SignalMode::Identical => clamp_eta(a.eta, a.seed_tol, |e| SeedSym::new(a.p, e, a.lam).is_ok()),
    };
    let Some(eta) = clamped else {
        let e = match a.mode {
            SignalMode::Independent => SeedIndep::new(a.eta, a.lam).err(),
            SignalMode::Identical => SeedSym::new(a.p, a.eta, a.lam).err(),
        };
        return Err(CliError::Invalid(e.map_or_else(|| "invalid seed".into(), |e| e.to_string())));
    };
    writeln!(out, "mode={}", a.mode).map_err(io)?;
    if eta != a.eta {
        writeln!(
            out,
            "note: eta {} lies outside the state region; using boundary value {}",
            fmt_sig(a.eta),
            fmt_sig(eta)
        )
        .map_err(io)?;
    }
    let sol = match a.mode {
        SignalMode::Independent => {
            writeln!(out, "eta={} lambda={}", fmt_sig(eta), fmt_sig(a.lam)).map_err(io)?;
            solve_indep(SeedIndep::new(eta, a.lam)?)?
        }
        SignalMode::Identical => {
            writeln!(out, "p={} eta={} lambda={}", fmt_sig(a.p), fmt_sig(eta), fmt_sig(a.lam)).map_err(io)?;
            solve_identical(SeedSym::new(a.p, eta, a.lam)?)?
        }
    };
    report_solution(&sol, out).map_err(io)
}

fn clone_check(a: &CloneArgs, out: &mut dyn Write) -> Result<(), CliError> {
    if a.max_n == 0 {
        return Err(CliError::Invalid("--max-n must be at least 1".into()));
    }
    let cloned = uqcm(&PureQubit::new(0.0, 0.0)?);
    let s = sym_params_of(&cloned)?;
    let sol = solve_identical(s)?;
    writeln!(out, "uqcm p={} eta={} lambda={}", fmt_sig(s.p), fmt_sig(s.eta), fmt_sig(s.lam)).map_err(io)?;
    writeln!(out, "uqcm eta_tilde={}", fmt_sig(sol.eta_tilde)).map_err(io)?;
    writeln!(out, "N,input_degree,target_degree,obstruction").map_err(io)?;
    for n in 1..=a.max_n {
        let r = fourier_degree_report(n, a.eta)?;
        writeln!(out, "{},{},{},{}", r.n_inputs, r.input_degree, r.target_degree, r.obstruction).map_err(io)?;
    }
    Ok(())
}

fn print_matrix(name: &str, m: &RMat, out: &mut dyn Write) -> std::io::Result<()> {
    writeln!(out, "{name} =")?;
    for i in 0..m.rows() {
        let row: Vec<String> = (0..m.cols()).map(|j| format!("{:>16}", output::fmt_digits(m[(i, j)], 9))).collect();
        writeln!(out, "{}", row.join(" "))?;
    }
    Ok(())
}

fn gauss(a: &GaussArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let state = twin_beam(a.lam)?;
    let sol = solve_noise(&state, a.slack)?;
    let decorrelated = apply_displacement_noise(&state, &sol.noise);
    let print_all = |w: &mut dyn Write| -> std::io::Result<()> {
        print_matrix("M", state.m(), w)?;
        print_matrix("Sigma", sol.noise.sigma(), w)?;
        match sol.noise.g() {
            Some(g) => print_matrix("G", g, w)?,
            None => writeln!(w, "G = (singular noise)")?,
        }
        print_matrix("M_tilde", decorrelated.m(), w)
    };
    print_all(out).map_err(io)?;
    for mode in 0..2 {
        let nbar = marginal_occupation(&decorrelated, mode)?;
        writeln!(out, "nbar_{mode}={}", fmt_sig(nbar)).map_err(io)?;
    }
    writeln!(out, "t={} t_min={}", fmt_sig(sol.t), fmt_sig(sol.t_min)).map_err(io)?;
    // The often-quoted weight for this state is the increment R(Σ) at slack ε·2λ/(1−λ²).
    let k = 2.0 * a.lam / (1.0 - a.lam * a.lam);
    if k > 0.0 {
        let eps = a.slack / k;
        let dev = sol.noise.added_noise().max_abs_diff(&twin_beam_reference_noise(a.lam, eps));
        writeln!(out, "reference increment (eps={}) deviation={:.3e}", fmt_sig(eps), dev).map_err(io)?;
    }
    Ok(())
}
