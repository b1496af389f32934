//! CSV and PGM renderings of sweep grids.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use decorr::solver::SweepGrid;

use crate::CliError;

/// `x` with 12 significant digits, trailing zeros trimmed.
pub fn fmt_sig(x: f64) -> String {
    fmt_digits(x, 12)
}

pub fn fmt_digits(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if !(-5..=15).contains(&exp) {
        return format!("{:.*e}", digits - 1, x);
    }
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    let s = format!("{x:.decimals$}");
    let s = if s.contains('.') { s.trim_end_matches('0').trim_end_matches('.').to_string() } else { s };
    if s == "-0" {
        "0".into()
    } else {
        s
    }
}

fn param_count(grid: &SweepGrid) -> usize {
    grid.cells.iter().find_map(|c| c.value.as_ref().map(|v| v.params.len())).unwrap_or(match grid.spec.mode {
        decorr::channels::SignalMode::Independent => 3,
        decorr::channels::SignalMode::Identical => 6,
    })
}

/// One row per grid cell, `λ` ascending then `η` ascending. Invalid seeds
/// keep their row with empty value fields.
pub fn csv_string(grid: &SweepGrid) -> String {
    let n = param_count(grid);
    let mut s = String::from("eta,lambda,eta_tilde");
    for k in 1..=n {
        let _ = write!(s, ",param{k}");
    }
    s.push('\n');
    for cell in &grid.cells {
        let _ = write!(s, "{},{},", fmt_sig(cell.eta), fmt_sig(cell.lam));
        match &cell.value {
            Some(v) => {
                s.push_str(&fmt_sig(v.eta_tilde));
                for p in &v.params {
                    let _ = write!(s, ",{}", fmt_sig(*p));
                }
            }
            None => s.push_str(&",".repeat(n)),
        }
        s.push('\n');
    }
    s
}

pub fn pixel(eta_tilde: f64) -> u8 {
    (255.0 * eta_tilde).round().clamp(0.0, 255.0) as u8
}

/// Plain PGM (`P2`, maxval 255): `λ` descending down the rows, `η` ascending
/// across; invalid cells are black.
pub fn pgm_string(grid: &SweepGrid) -> String {
    let (w, h) = (grid.spec.eta.steps, grid.spec.lam.steps);
    let mut s = format!("P2\n{w} {h}\n255\n");
    for i in (0..h).rev() {
        let row: Vec<String> =
            (0..w).map(|j| grid.cell(i, j).value.as_ref().map_or(0, |v| pixel(v.eta_tilde)).to_string()).collect();
        s.push_str(&row.join(" "));
        s.push('\n');
    }
    s
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::Write(format!("{}: {e}", path.display())))
}

pub fn write_csv(grid: &SweepGrid, path: &Path) -> Result<(), CliError> {
    write_file(path, &csv_string(grid))
}

pub fn render_pgm(grid: &SweepGrid, path: &Path) -> Result<(), CliError> {
    write_file(path, &pgm_string(grid))
}

/// Parses a plain PGM back into `(width, height, maxval, pixels)`.
pub fn parse_pgm(text: &str) -> Option<(usize, usize, u32, Vec<u32>)> {
    let mut tokens = text.lines().filter(|l| !l.starts_with('#')).flat_map(str::split_whitespace);
    if tokens.next()? != "P2" {
        return None;
    }
    let w = tokens.next()?.parse().ok()?;
    let h = tokens.next()?.parse().ok()?;
    let maxval = tokens.next()?.parse().ok()?;
    let pixels: Vec<u32> = tokens.map(|t| t.parse().ok()).collect::<Option<_>>()?;
    (pixels.len() == w * h && pixels.iter().all(|&p| p <= maxval)).then_some((w, h, maxval, pixels))
}
