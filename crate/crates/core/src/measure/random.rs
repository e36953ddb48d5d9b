use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::atomic::{free_measure, integrate, normalization, AtomicMeasure, MeasureMeta, MeasureSource};
use super::test_fn::TestFunction;
use crate::eigen::{banded_inertia, eigs_in_window, sturm_count, tridiagonalize, InertiaMethod};
use crate::error::{Error, Result};
use crate::io::format::fmt_num;
use crate::model::{assemble_hamiltonian, Rescale, SiteField};
use crate::quad::pairwise_sum_by;

/// Largest cube (in sites) handled by the dense path.
pub const DENSE_CAP: usize = 4096;

/// Default number of grid cells for the counting path.
pub const DEFAULT_COUNTING_CELLS: usize = 512;

/// Bisection tolerance for eigenvalues in the dense path (unscaled units).
const DENSE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum MeasureMethod {
    /// Tridiagonalize and bisect the window.
    #[default]
    Dense,
    /// Normalized eigenvalue counts on `cells` uniform cells of [−K, K].
    Counting { cells: usize, inertia: InertiaMethod },
}

/// Uniform grid x_0 < … < x_n on which a counting function is sampled.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CountingGrid {
    pub lo: f64,
    pub hi: f64,
    pub cells: usize,
}

impl CountingGrid {
    pub fn new(lo: f64, hi: f64, cells: usize) -> Result<Self> {
        if !(lo < hi) || cells == 0 || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::Config(format!(
                "bad counting grid [{lo}, {hi}] with {cells} cells"
            )));
        }
        Ok(CountingGrid { lo, hi, cells })
    }

    pub fn step(&self) -> f64 {
        (self.hi - self.lo) / self.cells as f64
    }

    pub fn edge(&self, i: usize) -> f64 {
        if i == self.cells {
            self.hi
        } else {
            self.lo + i as f64 * self.step()
        }
    }

    pub fn midpoint(&self, i: usize) -> f64 {
        self.lo + (i as f64 + 0.5) * self.step()
    }
}

/// x ↦ (2L+1)^{−(d−1)} #{λ : (L+1)(λ − E) ≤ x}, sampled at the grid edges
/// x_0, x_n and at every cell midpoint.
#[derive(Debug, Clone, PartialEq)]
pub struct CountingFunction {
    pub meta: MeasureMeta,
    pub grid: CountingGrid,
    /// C(x_0), C(x_n).
    pub ends: (f64, f64),
    /// C at the cell midpoints.
    pub counts: Vec<f64>,
    /// Shifts moved after an LDLᵀ pivot breakdown.
    pub nudged: usize,
}

impl CountingFunction {
    /// Sample an atomic measure's distribution function on a grid.
    pub fn from_measure(measure: &AtomicMeasure, grid: CountingGrid) -> Self {
        CountingFunction {
            meta: measure.meta,
            grid,
            ends: (measure.count_le(grid.lo), measure.count_le(grid.hi)),
            counts: (0..grid.cells).map(|i| measure.count_le(grid.midpoint(i))).collect(),
            nudged: 0,
        }
    }

    /// Normalized mass in (x_0, x_n].
    pub fn mass(&self) -> f64 {
        self.ends.1 - self.ends.0
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,count\n");
        let mut row = |x: f64, c: f64| writeln!(out, "{},{}", fmt_num(x), fmt_num(c)).unwrap();
        row(self.grid.lo, self.ends.0);
        for (i, &c) in self.counts.iter().enumerate() {
            row(self.grid.midpoint(i), c);
        }
        row(self.grid.hi, self.ends.1);
        out
    }
}

/// μ^ω_{L,E} in one of its two representations.
#[derive(Debug, Clone, PartialEq)]
pub enum RandomMeasure {
    Atoms(AtomicMeasure),
    Counting(CountingFunction),
}

impl RandomMeasure {
    pub fn meta(&self) -> &MeasureMeta {
        match self {
            RandomMeasure::Atoms(m) => &m.meta,
            RandomMeasure::Counting(c) => &c.meta,
        }
    }

    pub fn to_csv(&self) -> String {
        match self {
            RandomMeasure::Atoms(m) => m.to_csv(),
            RandomMeasure::Counting(c) => c.to_csv(),
        }
    }
}

fn random_meta(field: &SiteField, energy: f64, window: f64) -> MeasureMeta {
    MeasureMeta {
        dim: field.cube().dim(),
        half_width: field.cube().half_width(),
        energy,
        window,
        source: MeasureSource::Random,
        seed: field.seed(),
    }
}

fn check_args(energy: f64, window: f64) -> Result<()> {
    if !energy.is_finite() {
        return Err(Error::Config(format!("energy must be finite, got {energy}")));
    }
    if !(window > 0.0 && window.is_finite()) {
        return Err(Error::Config(format!(
            "window half-width must be finite and > 0, got {window}"
        )));
    }
    Ok(())
}

/// μ^ω_{L,E} on [−K, K]. A vanishing field reduces H to Δ and returns the
/// closed-form free measure.
pub fn random_measure(field: &SiteField, energy: f64, window: f64, method: &MeasureMethod) -> Result<RandomMeasure> {
    check_args(energy, window)?;
    match *method {
        MeasureMethod::Dense => {
            if field.is_zero() {
                let cube = field.cube();
                let mut m = free_measure(cube.dim(), cube.half_width(), energy, window)?;
                m.meta = random_meta(field, energy, window);
                return Ok(RandomMeasure::Atoms(m));
            }
            dense_measure(field, energy, window).map(RandomMeasure::Atoms)
        }
        MeasureMethod::Counting { cells, inertia } => {
            let grid = CountingGrid::new(-window, window, cells)?;
            counting_measure(field, energy, grid, inertia).map(RandomMeasure::Counting)
        }
    }
}

/// Dense path without shortcuts: tridiagonalize the unscaled H and bisect
/// [E − K/(L+1), E + K/(L+1)].
pub fn dense_measure(field: &SiteField, energy: f64, window: f64) -> Result<AtomicMeasure> {
    check_args(energy, window)?;
    let cube = field.cube();
    if cube.len() > DENSE_CAP {
        return Err(Error::ResourceLimit {
            what: "dense eigensolve (sites)",
            needed: cube.len() as u128,
            cap: DENSE_CAP as u128,
        });
    }
    let h = assemble_hamiltonian(cube, Some(field), None)?;
    h.check_finite()?;
    let t = tridiagonalize(&h)?;
    let scale = (cube.half_width() + 1) as f64;
    let w = eigs_in_window(&t, energy - window / scale, energy + window / scale, DENSE_TOL);
    Ok(AtomicMeasure::from_eigenvalues(
        random_meta(field, energy, window),
        w.values,
    ))
}

/// Counting path: inertia of (L+1)(H − E) − x at the grid edges and cell
/// midpoints, evaluated in parallel.
pub fn counting_measure(
    field: &SiteField,
    energy: f64,
    grid: CountingGrid,
    inertia: InertiaMethod,
) -> Result<CountingFunction> {
    let cube = field.cube();
    let window = grid.lo.abs().max(grid.hi.abs());
    check_args(energy, window)?;
    let m = assemble_hamiltonian(cube, Some(field), Some(Rescale::local(cube, energy)))?;
    m.check_finite()?;
    let tri = match inertia {
        InertiaMethod::Sturm => Some(tridiagonalize(&m)?),
        InertiaMethod::BandedLdl => None,
    };
    let mut shifts = vec![grid.lo, grid.hi];
    shifts.extend((0..grid.cells).map(|i| grid.midpoint(i)));
    let counts: Vec<(usize, bool)> = shifts
        .par_iter()
        .map(|&x| match &tri {
            Some(t) => Ok((sturm_count(t, x).count, false)),
            None => banded_inertia(&m, x).map(|c| (c.count, c.nudged)),
        })
        .collect::<Result<_>>()?;
    let v = normalization(cube.dim(), cube.half_width());
    let nudged = counts.iter().filter(|c| c.1).count();
    let norm: Vec<f64> = counts.iter().map(|c| c.0 as f64 * v).collect();
    Ok(CountingFunction {
        meta: random_meta(field, energy, window),
        grid,
        ends: (norm[0], norm[1]),
        counts: norm[2..].to_vec(),
        nudged,
    })
}

/// Stieltjes integral of f against a counting function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CountingIntegral {
    pub value: f64,
    /// mass · sup|f′| · h/2.
    pub error_bound: f64,
    /// The error bound exceeds the requested budget.
    pub coarse: bool,
}

/// ∫ f dμ = −∫ f′ C with C frozen at each cell midpoint:
/// −Σ_i C(m_i) (f(x_{i+1}) − f(x_i)).
///
/// Summation by parts shows every atom is evaluated at the grid edge on its
/// side of the cell midpoint, so the error is at most mass·sup|f′|·h/2.
pub fn integrate_counting(c: &CountingFunction, f: &TestFunction, budget: Option<f64>) -> Result<CountingIntegral> {
    let (lo, hi) = f.support();
    let g = c.grid;
    if lo < g.lo || hi > g.hi {
        return Err(Error::Precondition(format!(
            "counting grid [{}, {}] does not span the test function support [{lo}, {hi}]",
            g.lo, g.hi
        )));
    }
    let fe: Vec<f64> = (0..=g.cells).map(|i| f.eval(g.edge(i))).collect();
    let value = -pairwise_sum_by(g.cells, |i| c.counts[i] * (fe[i + 1] - fe[i]));
    let error_bound = c.mass().abs() * f.derivative_sup() * 0.5 * g.step();
    Ok(CountingIntegral {
        value,
        error_bound,
        coarse: budget.is_some_and(|b| error_bound > b),
    })
}

/// X_L = ∫ f dμ^ω − ∫ f dμ⁰, with the error bound of the counting path (0 for
/// atomic measures).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct XStatistic {
    pub value: f64,
    pub error_bound: f64,
}

pub fn x_statistic(free: &AtomicMeasure, random: &RandomMeasure, f: &TestFunction) -> Result<XStatistic> {
    free.meta.check_matches(random.meta())?;
    free.meta.check_covers(f)?;
    let base = integrate(free, f);
    match random {
        RandomMeasure::Atoms(m) => {
            m.meta.check_covers(f)?;
            Ok(XStatistic {
                value: integrate(m, f) - base,
                error_bound: 0.0,
            })
        }
        RandomMeasure::Counting(c) => {
            let r = integrate_counting(c, f, None)?;
            Ok(XStatistic {
                value: r.value - base,
                error_bound: r.error_bound,
            })
        }
    }
}

/// ‖(i+ξ)f̂‖₁ · (2L+1)^{−(d−2)} · Σ_n a_n |q_n|.
pub fn bound_rhs(f: &TestFunction, field: &SiteField) -> Result<f64> {
    let cube = field.cube();
    let trace = field.weighted_abs_sum();
    if trace == 0.0 {
        return Ok(0.0);
    }
    let norm = f.fourier_norm()?.value;
    let side = (2 * cube.half_width() + 1) as f64;
    Ok(norm * side.powi(2 - cube.dim() as i32) * trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigen::full_spectrum;
    use crate::eigen::Tridiagonal;
    use crate::model::{Cube, DisorderLaw, PotentialProfile};

    fn decaying() -> PotentialProfile {
        PotentialProfile::Decaying {
            amplitude: 1.0,
            epsilon: 0.5,
        }
    }

    #[test]
    fn zero_field_is_free() {
        let cube = Cube::new(2, 4).unwrap();
        let field = SiteField::zero(cube);
        let free = free_measure(2, 4, 0.5, 3.0).unwrap();
        let RandomMeasure::Atoms(m) = random_measure(&field, 0.5, 3.0, &MeasureMethod::Dense).unwrap() else {
            panic!()
        };
        assert_eq!(m.atoms(), free.atoms());
        let f = TestFunction::bump(0.0, 3.0).unwrap();
        assert_eq!(x_statistic(&free, &RandomMeasure::Atoms(m), &f).unwrap().value, 0.0);

        // The dense path itself reproduces the closed form.
        let dense = dense_measure(&field, 0.5, 3.0).unwrap();
        assert_eq!(dense.atoms().len(), free.atoms().len());
        for (a, b) in dense.atoms().iter().zip(free.atoms()) {
            assert!((a.position - b.position).abs() < 1e-10, "{a:?} {b:?}");
            assert_eq!(a.weight, b.weight);
        }
    }

    #[test]
    fn three_site_chain_with_center_potential() {
        let c = 0.7;
        let cube = Cube::new(1, 1).unwrap();
        let field = SiteField::from_potential(cube, vec![0.0, c, 0.0]).unwrap();
        let m = dense_measure(&field, 0.0, 100.0).unwrap();
        let oracle = full_spectrum(&Tridiagonal::new(vec![0.0, c, 0.0], vec![1.0, 1.0])).unwrap();
        assert_eq!(m.atoms().len(), 3);
        for (a, l) in m.atoms().iter().zip(&oracle) {
            assert!((a.position - 2.0 * l).abs() < 1e-11, "{a:?} {l}");
            assert_eq!(a.weight, 1.0);
        }
    }

    #[test]
    fn counting_increments_match_dense_count() {
        let cube = Cube::new(2, 8).unwrap();
        let law = DisorderLaw::UniformSym { half_width: 1.0 };
        for seed in 0..3 {
            let field = SiteField::sample(cube, &decaying(), &law, seed);
            let dense = dense_measure(&field, 1.3, 4.0).unwrap();
            for inertia in [InertiaMethod::BandedLdl, InertiaMethod::Sturm] {
                let grid = CountingGrid::new(-4.0, 4.0, 64).unwrap();
                let c = counting_measure(&field, 1.3, grid, inertia).unwrap();
                assert!((c.mass() - dense.mass_in(-4.0, 4.0)).abs() < 1e-12);
                for i in 0..grid.cells {
                    let x = grid.midpoint(i);
                    assert!((c.counts[i] - c.ends.0 - dense.mass_in(-4.0, x)).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn counting_integral_matches_atoms() {
        let free = free_measure(1, 1, 0.0, 10.0).unwrap();
        let f = TestFunction::plateau(3.0, 0.1).unwrap();
        let grid = CountingGrid::new(-3.1, 3.1, 6200).unwrap();
        let c = CountingFunction::from_measure(&free, grid);
        let r = integrate_counting(&c, &f, Some(0.05)).unwrap();
        assert!((r.value - 3.0).abs() < 0.01, "{r:?}");
        assert!(!r.coarse);

        let empty = CountingFunction {
            counts: vec![0.0; grid.cells],
            ends: (0.0, 0.0),
            ..c.clone()
        };
        assert_eq!(integrate_counting(&empty, &f, None).unwrap().value, 0.0);

        let coarse = CountingFunction::from_measure(&free, CountingGrid::new(-3.1, 3.1, 4).unwrap());
        assert!(integrate_counting(&coarse, &f, Some(1e-3)).unwrap().coarse);
    }

    #[test]
    fn counting_and_dense_agree_within_bound() {
        let cube = Cube::new(2, 8).unwrap();
        let law = DisorderLaw::UniformSym { half_width: 1.0 };
        let f = TestFunction::bump(0.2, 2.5).unwrap();
        for seed in 0..20 {
            let field = SiteField::sample(cube, &decaying(), &law, 100 + seed);
            let dense = dense_measure(&field, 0.9, 2.7).unwrap();
            let grid = CountingGrid::new(-2.3, 2.7, DEFAULT_COUNTING_CELLS).unwrap();
            let c = counting_measure(&field, 0.9, grid, InertiaMethod::BandedLdl).unwrap();
            let r = integrate_counting(&c, &f, None).unwrap();
            let exact = integrate(&dense, &f);
            assert!(
                (r.value - exact).abs() <= r.error_bound,
                "seed {seed}: {} vs {exact} ± {}",
                r.value,
                r.error_bound
            );
        }
    }

    #[test]
    fn tiny_perturbation_gives_tiny_x() {
        let cube = Cube::new(1, 1).unwrap();
        let field = SiteField::from_potential(cube, vec![0.0, 1e-8, 0.0]).unwrap();
        let f = TestFunction::bump(0.0, 4.0).unwrap();
        let free = free_measure(1, 1, 0.0, 4.0).unwrap();
        let r = random_measure(&field, 0.0, 4.0, &MeasureMethod::Dense).unwrap();
        assert!(x_statistic(&free, &r, &f).unwrap().value.abs() <= 1e-6);
    }

    #[test]
    fn mismatched_metadata_is_rejected() {
        let field = SiteField::zero(Cube::new(2, 3).unwrap());
        let free = free_measure(2, 4, 0.0, 3.0).unwrap();
        let r = random_measure(&field, 0.0, 3.0, &MeasureMethod::Dense).unwrap();
        let f = TestFunction::bump(0.0, 1.0).unwrap();
        assert!(matches!(x_statistic(&free, &r, &f), Err(Error::MetadataMismatch(_))));
        let free = free_measure(2, 3, 0.0, 0.5).unwrap();
        assert!(matches!(x_statistic(&free, &r, &f), Err(Error::Precondition(_))));
    }

    #[test]
    fn bound_rhs_arithmetic() {
        let cube = Cube::new(3, 2).unwrap();
        let f = TestFunction::bump(0.0, 1.0).unwrap();
        let zero = SiteField::zero(cube);
        assert_eq!(bound_rhs(&f, &zero).unwrap(), 0.0);
        let field = SiteField::from_raw(cube, &PotentialProfile::Constant { eta: 0.1 }, vec![1.0; 125]).unwrap();
        let norm = f.fourier_norm().unwrap().value;
        assert!((bound_rhs(&f, &field).unwrap() - 2.5 * norm).abs() < 1e-12 * norm);
    }

    #[test]
    fn dense_cap() {
        let field = SiteField::zero(Cube::new(3, 8).unwrap());
        assert!(matches!(
            dense_measure(&field, 0.0, 1.0),
            Err(Error::ResourceLimit { .. })
        ));
    }
}
