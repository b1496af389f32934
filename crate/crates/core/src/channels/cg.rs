//! Clebsch-Gordan coefficients `⟨J M | j1 m1; j2 m2⟩` (Condon-Shortley phases).
//!
//! All spins here are small integers, so Racah's closed form with exact
//! factorials is both simple and exact to rounding.

fn fact(n: i64) -> f64 {
    debug_assert!(n >= 0);
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// `⟨J M | j1 m1; j2 m2⟩` for integer spins. Returns 0 outside selection rules.
pub fn clebsch_gordan(j1: i64, m1: i64, j2: i64, m2: i64, j: i64, m: i64) -> f64 {
    if m1 + m2 != m || m1.abs() > j1 || m2.abs() > j2 || m.abs() > j {
        return 0.0;
    }
    if j < (j1 - j2).abs() || j > j1 + j2 {
        return 0.0;
    }
    let pre =
        ((2 * j + 1) as f64 * fact(j + j1 - j2) * fact(j - j1 + j2) * fact(j1 + j2 - j) / fact(j1 + j2 + j + 1)).sqrt();
    let norm = (fact(j + m) * fact(j - m) * fact(j1 - m1) * fact(j1 + m1) * fact(j2 - m2) * fact(j2 + m2)).sqrt();
    let mut sum = 0.0;
    for k in 0..=(j1 + j2 + j) {
        let dens = [k, j1 + j2 - j - k, j1 - m1 - k, j2 + m2 - k, j - j2 + m1 + k, j - j1 - m2 + k];
        if dens.iter().any(|&d| d < 0) {
            continue;
        }
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign / dens.iter().map(|&d| fact(d)).product::<f64>();
    }
    pre * norm * sum
}
