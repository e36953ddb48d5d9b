use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::io::format::fmt_num;
use crate::model::{Cube, DisorderLaw};

/// γ_ν = E|q|, in closed form.
pub fn gamma_of(law: &DisorderLaw) -> f64 {
    law.first_abs_moment()
}

/// M_L = Σ_{n∈Λ_L} (1 + |n|)^{−d−ε/2} (|q(n)| − γ) for L = 0, …, L_max.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MartingaleTrace {
    pub dim: usize,
    pub epsilon: f64,
    pub law: DisorderLaw,
    pub seed: u64,
    pub gamma: f64,
    /// `values[L]` is M_L; `values[0]` is the origin term.
    pub values: Vec<f64>,
}

impl MartingaleTrace {
    pub fn half_width_max(&self) -> usize {
        self.values.len() - 1
    }

    /// L^{−ε/2} M_L for L ≥ 1.
    pub fn normalized(&self, half_width: usize) -> f64 {
        (half_width as f64).powf(-0.5 * self.epsilon) * self.values[half_width]
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("L,M,normalized\n");
        for (l, m) in self.values.iter().enumerate().skip(1) {
            writeln!(out, "{l},{},{}", fmt_num(*m), fmt_num(self.normalized(l))).unwrap();
        }
        out
    }
}

/// Accumulate M_L shell by shell (sup-norm shells Λ_L \ Λ_{L−1}), so each
/// increment uses only the samples of its own shell.
pub fn martingale_trace(
    dim: usize,
    epsilon: f64,
    law: &DisorderLaw,
    seed: u64,
    half_width_max: usize,
) -> Result<MartingaleTrace> {
    law.validate()?;
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::Config(format!("epsilon must be finite and > 0, got {epsilon}")));
    }
    let gamma = gamma_of(law);
    let exponent = -(dim as f64) - 0.5 * epsilon;
    let mut shells = vec![0.0; half_width_max + 1];
    if half_width_max == 0 {
        let q = law.sample_at(seed, &vec![0; dim]);
        shells[0] = q.abs() - gamma;
    } else {
        let cube = Cube::new(dim, half_width_max)?;
        cube.for_each_site(|_, site| {
            let shell = site.iter().map(|n| n.unsigned_abs() as usize).max().unwrap_or(0);
            let norm = site.iter().map(|&n| (n * n) as f64).sum::<f64>().sqrt();
            let q = law.sample_at(seed, site);
            shells[shell] += (1.0 + norm).powf(exponent) * (q.abs() - gamma);
        });
    }
    let mut values = Vec::with_capacity(shells.len());
    let mut acc = 0.0;
    for s in shells {
        acc += s;
        values.push(acc);
    }
    Ok(MartingaleTrace {
        dim,
        epsilon,
        law: *law,
        seed,
        gamma,
        values,
    })
}

/// Var(M_∞) = Var|q| · Σ_{n∈ℤ^d} (1 + |n|)^{−2d−ε}, summed over Λ_L.
pub fn martingale_variance(dim: usize, epsilon: f64, law: &DisorderLaw, half_width: usize) -> Result<f64> {
    let exponent = -2.0 * dim as f64 - epsilon;
    let mut sum = 0.0;
    Cube::new(dim, half_width)?.for_each_site(|_, site| {
        let norm = site.iter().map(|&n| (n * n) as f64).sum::<f64>().sqrt();
        sum += (1.0 + norm).powf(exponent);
    });
    Ok(law.abs_variance() * sum)
}
