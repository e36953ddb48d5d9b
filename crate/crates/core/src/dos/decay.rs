use std::f64::consts::PI;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::io::format::fmt_num;
use crate::quad::GaussLegendre;

/// n̂_1(t) = (1/π) ∫_0^π cos(2t cos θ) dθ, the characteristic function of
/// 2cos(uniform angle). Equals J_0(2t).
pub fn characteristic_1d(t: f64) -> f64 {
    let gl = GaussLegendre::new(16);
    let panels = 8 + (2.0 * t.abs()).ceil() as usize;
    gl.composite(0.0, PI, panels, |theta| (2.0 * t * theta.cos()).cos()) / PI
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayRow {
    pub t: f64,
    /// n̂_r(t) = n̂_1(t)^r.
    pub value: f64,
    /// |n̂_r(t)| · t^{r/2}.
    pub scaled: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecayTable {
    pub r: usize,
    pub rows: Vec<DecayRow>,
    pub sup_scaled: f64,
}

impl DecayTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,value,scaled\n");
        for row in &self.rows {
            writeln!(out, "{},{},{}", fmt_num(row.t), fmt_num(row.value), fmt_num(row.scaled)).unwrap();
        }
        out
    }
}

/// Tabulate |n̂_r(t)| against t^{−r/2} on the given grid.
pub fn fourier_decay_check(r: usize, t_grid: &[f64]) -> Result<DecayTable> {
    if r == 0 {
        return Err(Error::Domain("decay check needs r ≥ 1".into()));
    }
    if let Some(t) = t_grid.iter().find(|t| !(t.is_finite() && **t >= 0.0)) {
        return Err(Error::Domain(format!("grid point {t} is not a finite t ≥ 0")));
    }
    let rows: Vec<DecayRow> = t_grid
        .iter()
        .map(|&t| {
            let value = characteristic_1d(t).powi(r as i32);
            DecayRow {
                t,
                value,
                scaled: value.abs() * t.powf(0.5 * r as f64),
            }
        })
        .collect();
    let sup_scaled = rows.iter().map(|row| row.scaled).fold(0.0, f64::max);
    Ok(DecayTable { r, rows, sup_scaled })
}

/// n log-spaced points from `lo` to `hi`.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n < 2 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    // J_0(x) = Σ (−x²/4)^m / (m!)².
    fn j0_series(x: f64) -> f64 {
        let q = -0.25 * x * x;
        let (mut term, mut sum) = (1.0, 1.0);
        for m in 1..80 {
            term *= q / (m * m) as f64;
            sum += term;
        }
        sum
    }

    #[test]
    fn matches_bessel_series() {
        for i in 0..=40 {
            let t = 0.1 * i as f64;
            assert!((characteristic_1d(t) - j0_series(2.0 * t)).abs() < 1e-12, "t={t}");
        }
        assert_eq!(characteristic_1d(0.0), 1.0);
    }

    #[test]
    fn large_t_amplitude() {
        // J_0(x) ≈ √(2/(πx)) cos(x − π/4) with error below 0.2·x^{−3/2}.
        for t in [10.0, 37.5, 100.0, 512.0, 1000.0] {
            let x = 2.0 * t;
            let leading = (2.0 / (PI * x)).sqrt() * (x - 0.25 * PI).cos();
            assert!((characteristic_1d(t) - leading).abs() < 0.2 * x.powf(-1.5), "t={t}");
        }
    }

    #[test]
    fn decay_bounded() {
        let grid = log_grid(10.0, 1000.0, 200);
        let t1 = fourier_decay_check(1, &grid).unwrap();
        assert!(t1.sup_scaled <= 1.0);
        for r in 2..=4 {
            let t = fourier_decay_check(r, &grid).unwrap();
            assert!(
                t.sup_scaled.is_finite() && t.sup_scaled <= 1.0,
                "r={r}: {}",
                t.sup_scaled
            );
        }
        let t4 = fourier_decay_check(4, &grid).unwrap();
        for (a, b) in t4.rows.iter().zip(&t1.rows) {
            assert!(a.value.abs() <= b.value.abs().powi(4) * (1.0 + 1e-12));
        }
        let zero = fourier_decay_check(3, &[0.0]).unwrap();
        assert_eq!(zero.rows[0].value, 1.0);
    }
}
