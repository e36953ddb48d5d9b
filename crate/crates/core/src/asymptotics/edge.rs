use std::f64::consts::{PI, SQRT_2};
use std::fmt::Write as _;

use serde::Serialize;

use super::experiment::median;
use crate::dos::ids;
use crate::error::{Error, Result};
use crate::io::format::fmt_num;
use crate::measure::{free_measure, integrate, TestFunction};

fn in_band_edge(dim: usize, energy: f64) -> bool {
    let e = energy.abs();
    e > 2.0 * dim as f64 - 2.0 && e < 2.0 * dim as f64
}

/// I(γ) = (2L+1)^{−1} Σ_{k=1}^{2L+1} [γ > c_k] (γ − c_k)^{−1/2},
/// c_k = cos(kπ/(2L+2)).
///
/// Singular when γ sits on (or within rounding of) a node c_k, e.g. γ = −1/2
/// whenever 3 divides 2L + 2.
pub fn edge_sum(gamma: f64, half_width: usize) -> f64 {
    let n = 2 * half_width + 1;
    let step = PI / (2 * half_width + 2) as f64;
    let mut sum = 0.0;
    // c_k decreases in k; walk from the bottom of the band up.
    for k in (1..=n).rev() {
        let c = (k as f64 * step).cos();
        if !(gamma > c) {
            break;
        }
        sum += (gamma - c).powf(-0.5);
    }
    sum / n as f64
}

/// γ_i = −0.1 − 0.89 i / (n − 1), i = 0, …, n − 1: a grid in (−1, −0.1].
pub fn default_gamma_grid(n: usize) -> Vec<f64> {
    if n < 2 {
        return vec![-0.1];
    }
    (0..n).map(|i| -0.1 - 0.89 * i as f64 / (n - 1) as f64).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Lemma2Table {
    pub dim: usize,
    pub energy: f64,
    /// (L, ∫ f dμ⁰_{L,E}).
    pub integrals: Vec<(usize, f64)>,
    /// (γ, L, I(γ)).
    pub edge_sums: Vec<(f64, usize, f64)>,
}

impl Lemma2Table {
    /// max / median of the integrals; `None` when the median vanishes.
    pub fn spread(&self) -> Option<f64> {
        let values: Vec<f64> = self.integrals.iter().map(|p| p.1).collect();
        let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let med = median(values);
        (med > 0.0).then(|| max / med)
    }

    pub fn integrals_csv(&self) -> String {
        let mut out = String::from("L,integral\n");
        for (l, v) in &self.integrals {
            writeln!(out, "{l},{}", fmt_num(*v)).unwrap();
        }
        out
    }

    pub fn edge_sums_csv(&self) -> String {
        let mut out = String::from("gamma,L,I\n");
        for (g, l, v) in &self.edge_sums {
            writeln!(out, "{},{l},{}", fmt_num(*g), fmt_num(*v)).unwrap();
        }
        out
    }
}

/// ∫ f dμ⁰_{L,E} along `half_widths`, and I(γ) on `gammas` × `edge_half_widths`.
///
/// The energy must lie in the band edge 2d − 2 < |E| < 2d unless
/// `allow_outside` is set.
pub fn lemma2_diagnostic(
    dim: usize,
    energy: f64,
    f: &TestFunction,
    half_widths: &[usize],
    gammas: &[f64],
    edge_half_widths: &[usize],
    allow_outside: bool,
) -> Result<Lemma2Table> {
    if !allow_outside && !in_band_edge(dim, energy) {
        return Err(Error::Precondition(format!(
            "E = {energy} is outside the band edge {} < |E| < {}",
            2 * dim - 2,
            2 * dim
        )));
    }
    if let Some(g) = gammas.iter().find(|g| !(g.abs() < 1.0)) {
        return Err(Error::Domain(format!("γ = {g} must satisfy |γ| < 1")));
    }
    let (lo, hi) = f.support();
    let window = lo.abs().max(hi.abs());
    let integrals = half_widths
        .iter()
        .map(|&l| Ok((l, integrate(&free_measure(dim, l, energy, window)?, f))))
        .collect::<Result<Vec<_>>>()?;
    let mut edge_sums = Vec::with_capacity(gammas.len() * edge_half_widths.len());
    for &g in gammas {
        for &l in edge_half_widths {
            edge_sums.push((g, l, edge_sum(g, l)));
        }
    }
    Ok(Lemma2Table {
        dim,
        energy,
        integrals,
        edge_sums,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Positivity {
    /// ∫ f dμ⁰_{L,E} for the plateau of height 1 on [−K, K] with ramp δ.
    pub integral: f64,
    /// (K/(π√2)) · N_{d−1}((E − 2 + δ, E + 2 − δ)).
    pub reference: f64,
    pub ratio: f64,
}

/// Compare the free measure of a plateau with the band-edge lower bound.
pub fn positivity_check(
    dim: usize,
    energy: f64,
    half_width_k: f64,
    ramp: f64,
    half_width: usize,
) -> Result<Positivity> {
    if dim < 2 || !in_band_edge(dim, energy) {
        return Err(Error::Precondition(format!(
            "positivity needs d ≥ 2 and 2d − 2 < |E| < 2d, got d = {dim}, E = {energy}"
        )));
    }
    if !(ramp > 0.0 && ramp < 1.0) {
        return Err(Error::Precondition(format!("δ = {ramp} must lie in (0, 1)")));
    }
    let (a, b) = (energy - 2.0 + ramp, energy + 2.0 - ramp);
    let inner = 2.0 * (dim - 1) as f64;
    if !(a.max(-inner) < b.min(inner)) {
        return Err(Error::Precondition(format!(
            "({a}, {b}) misses the spectrum (−{inner}, {inner}) of the transverse Laplacian"
        )));
    }
    let f = TestFunction::plateau(half_width_k, ramp)?;
    let measure = free_measure(dim, half_width, energy, f.reach())?;
    let integral = integrate(&measure, &f);
    let reference = half_width_k / (PI * SQRT_2) * ids(dim - 1, a, b)?;
    Ok(Positivity {
        integral,
        reference,
        ratio: integral / reference,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_sum_by_hand() {
        // L = 1: c_k = cos(kπ/4) for k = 1, 2, 3; only c_3 = −1/√2 < −0.5.
        let want = (-0.5 + 0.5f64.sqrt()).powf(-0.5) / 3.0;
        assert!((edge_sum(-0.5, 1) - want).abs() < 1e-15);
        assert_eq!(edge_sum(-0.99, 1), 0.0);
    }

    #[test]
    fn edge_sum_self_converges() {
        for g in [-0.999, -0.9, -0.45, -0.1] {
            let (a, b) = (edge_sum(g, 1000), edge_sum(g, 2000));
            assert!(a.is_finite() && (a - b).abs() <= 0.1 * b, "γ={g}: {a} {b}");
        }
    }

    #[test]
    fn regime_enforced() {
        let f = TestFunction::bump(0.0, 1.0).unwrap();
        assert!(lemma2_diagnostic(3, 1.0, &f, &[4], &[-0.5], &[10], false).is_err());
        assert!(lemma2_diagnostic(3, 1.0, &f, &[4], &[-0.5], &[10], true).is_ok());
        assert!(lemma2_diagnostic(3, 5.0, &f, &[4], &[-1.0], &[10], false).is_err());
    }

    #[test]
    fn one_dimensional_integrals_bounded() {
        let f = TestFunction::bump(0.0, 3.0).unwrap();
        let t = lemma2_diagnostic(1, 1.98, &f, &[20, 40, 80, 160, 320], &[], &[], false).unwrap();
        assert!(t.integrals.iter().all(|p| p.1.is_finite()));
        assert!(t.spread().unwrap() <= 1.5, "{:?}", t.integrals);
    }

    #[test]
    fn positivity_preconditions() {
        assert!(positivity_check(3, 3.0, 2.0, 0.5, 10).is_err());
        assert!(positivity_check(3, 5.0, 2.0, 1.5, 10).is_err());
        assert!(positivity_check(1, 1.5, 2.0, 0.5, 10).is_err());
    }

    #[test]
    fn positivity_in_two_dimensions() {
        let p = positivity_check(2, 3.0, 1.0, 0.5, 320).unwrap();
        assert!(p.integral > 0.0 && p.reference > 0.0);
    }
}
