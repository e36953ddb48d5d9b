use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::test_fn::TestFunction;
use crate::error::{Error, Result};
use crate::free::{enumerate_window, group_values, FreeAtomList, DEFAULT_ENUMERATION_CAP, GROUPING_TOL};
use crate::io::format::fmt_num;
use crate::quad::pairwise_sum_by;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MeasureSource {
    Free,
    Random,
}

/// Where a measure came from and the window it covers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasureMeta {
    pub dim: usize,
    pub half_width: usize,
    pub energy: f64,
    /// Atoms are complete on [−window, window] in rescaled units.
    pub window: f64,
    pub source: MeasureSource,
    pub seed: Option<u64>,
}

impl MeasureMeta {
    /// (2L+1)^{−(d−1)}.
    pub fn normalization(&self) -> f64 {
        normalization(self.dim, self.half_width)
    }

    pub(crate) fn check_matches(&self, other: &MeasureMeta) -> Result<()> {
        if self.dim != other.dim || self.half_width != other.half_width || self.energy != other.energy {
            return Err(Error::MetadataMismatch(format!(
                "(d={}, L={}, E={}) vs (d={}, L={}, E={})",
                self.dim, self.half_width, self.energy, other.dim, other.half_width, other.energy
            )));
        }
        Ok(())
    }

    /// The support of `f` lies inside the window, so no atom is missed.
    pub(crate) fn check_covers(&self, f: &TestFunction) -> Result<()> {
        let (lo, hi) = f.support();
        let slack = 1e-12 * (1.0 + self.window);
        if lo < -self.window - slack || hi > self.window + slack {
            return Err(Error::Precondition(format!(
                "test function support [{lo}, {hi}] exceeds the measure window ±{}",
                self.window
            )));
        }
        Ok(())
    }
}

pub(crate) fn normalization(dim: usize, half_width: usize) -> f64 {
    ((2 * half_width + 1) as f64).powi(-(dim as i32 - 1))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub position: f64,
    pub weight: f64,
}

/// Finite sum of weighted point masses, sorted by position.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomicMeasure {
    pub meta: MeasureMeta,
    atoms: Vec<Atom>,
}

impl AtomicMeasure {
    pub fn new(meta: MeasureMeta, mut atoms: Vec<Atom>) -> Result<Self> {
        if let Some(a) = atoms
            .iter()
            .find(|a| !(a.weight > 0.0 && a.weight.is_finite() && a.position.is_finite()))
        {
            return Err(Error::Domain(format!("invalid atom {a:?}")));
        }
        atoms.sort_by(|a, b| a.position.total_cmp(&b.position));
        Ok(AtomicMeasure { meta, atoms })
    }

    pub fn from_free(list: &FreeAtomList) -> Self {
        let v = normalization(list.dim, list.half_width);
        AtomicMeasure {
            meta: MeasureMeta {
                dim: list.dim,
                half_width: list.half_width,
                energy: list.energy,
                window: list.window,
                source: MeasureSource::Free,
                seed: None,
            },
            atoms: list
                .atoms
                .iter()
                .map(|&(position, m)| Atom {
                    position,
                    weight: m as f64 * v,
                })
                .collect(),
        }
    }

    /// Group eigenvalues λ (unscaled) within the enumeration tolerance and
    /// rescale to (L+1)(λ − E).
    pub(crate) fn from_eigenvalues(meta: MeasureMeta, values: Vec<f64>) -> Self {
        let v = meta.normalization();
        let scale = (meta.half_width + 1) as f64;
        let atoms = group_values(values, GROUPING_TOL)
            .into_iter()
            .map(|(lambda, m)| Atom {
                position: scale * (lambda - meta.energy),
                weight: m as f64 * v,
            })
            .collect();
        AtomicMeasure { meta, atoms }
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn total_mass(&self) -> f64 {
        pairwise_sum_by(self.atoms.len(), |i| self.atoms[i].weight)
    }

    /// Normalized count of atoms in [a, b].
    pub fn mass_in(&self, a: f64, b: f64) -> f64 {
        let lo = self.atoms.partition_point(|x| x.position < a);
        let hi = self.atoms.partition_point(|x| x.position <= b);
        pairwise_sum_by(hi.saturating_sub(lo), |i| self.atoms[lo + i].weight)
    }

    /// Normalized count of atoms ≤ x.
    pub fn count_le(&self, x: f64) -> f64 {
        let hi = self.atoms.partition_point(|a| a.position <= x);
        pairwise_sum_by(hi, |i| self.atoms[i].weight)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("position,weight\n");
        for a in &self.atoms {
            writeln!(out, "{},{}", fmt_num(a.position), fmt_num(a.weight)).unwrap();
        }
        out
    }
}

/// μ⁰_{L,E} restricted to [−K, K].
pub fn free_measure(dim: usize, half_width: usize, energy: f64, window: f64) -> Result<AtomicMeasure> {
    free_measure_capped(dim, half_width, energy, window, DEFAULT_ENUMERATION_CAP)
}

pub fn free_measure_capped(dim: usize, half_width: usize, energy: f64, window: f64, cap: u64) -> Result<AtomicMeasure> {
    let list = enumerate_window(dim, half_width, energy, window, cap)?;
    Ok(AtomicMeasure::from_free(&list))
}

/// Σ weight · f(position), pairwise summed.
pub fn integrate(measure: &AtomicMeasure, f: &TestFunction) -> f64 {
    let (lo, hi) = f.support();
    let atoms = measure.atoms();
    let first = atoms.partition_point(|a| a.position < lo);
    let last = atoms.partition_point(|a| a.position <= hi);
    pairwise_sum_by(last - first, |i| {
        let a = &atoms[first + i];
        a.weight * f.eval(a.position)
    })
}
