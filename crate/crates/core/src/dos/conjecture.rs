use std::f64::consts::PI;
use std::fmt::Write as _;

use log::warn;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::density::{finite_or_zero, ids, Density, DEFAULT_TABLE_NODES};
use crate::error::{Error, Result};
use crate::io::format::fmt_num;
use crate::measure::{free_measure, integrate, TestFunction};
use crate::quad::tanh_sinh;

/// Parameters of the conjectured limit
/// Σ_k ∫_0^π sin θ · n_{d−1}(E − 2cos θ) · f(πk sin θ) dθ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConjectureSpec {
    pub dim: usize,
    pub energy: f64,
    /// Largest |k| summed explicitly; the rest is extrapolated.
    #[serde(default = "default_k_max")]
    pub k_max: usize,
    /// Relative tolerance of each θ-integral.
    #[serde(default = "default_theta_tol")]
    pub theta_tol: f64,
    /// Chebyshev nodes per interval for a tabulated n_{d−1} (d ≥ 4).
    #[serde(default = "default_table_nodes")]
    pub table_nodes: usize,
    /// Accepted relative change under refinement.
    #[serde(default = "default_target")]
    pub target: f64,
    /// Refinements tried before giving up.
    #[serde(default = "default_max_refinements")]
    pub max_refinements: usize,
}

fn default_k_max() -> usize {
    128
}
fn default_theta_tol() -> f64 {
    1e-9
}
fn default_table_nodes() -> usize {
    DEFAULT_TABLE_NODES
}
fn default_target() -> f64 {
    1e-3
}
fn default_max_refinements() -> usize {
    3
}

impl ConjectureSpec {
    pub fn new(dim: usize, energy: f64) -> Self {
        ConjectureSpec {
            dim,
            energy,
            k_max: default_k_max(),
            theta_tol: default_theta_tol(),
            table_nodes: default_table_nodes(),
            target: default_target(),
            max_refinements: default_max_refinements(),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.dim < 2 {
            return Err(Error::Domain(format!("conjecture needs d ≥ 2, got {}", self.dim)));
        }
        let edge = 2.0 * self.dim as f64;
        if !(self.energy.abs() < edge) {
            return Err(Error::Domain(format!("E = {} outside (−{edge}, {edge})", self.energy)));
        }
        if self.k_max == 0 || !(self.theta_tol > 0.0) || !(self.target > 0.0) {
            return Err(Error::Config(
                "conjecture needs k_max ≥ 1, theta_tol > 0, target > 0".into(),
            ));
        }
        Ok(())
    }

    fn refined(&self) -> Self {
        ConjectureSpec {
            k_max: 2 * self.k_max,
            theta_tol: (self.theta_tol * 1e-2).max(1e-14),
            table_nodes: 2 * self.table_nodes,
            ..*self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConjectureValue {
    pub value: f64,
    /// Relative change against the previous, coarser evaluation.
    pub self_convergence: f64,
    /// Settings of the accepted evaluation.
    pub k_max: usize,
    pub theta_tol: f64,
    pub table_nodes: usize,
    /// The k = 0 term and the extrapolated |k| > k_max tail.
    pub zero_term: f64,
    pub tail: f64,
}

struct Evaluator<'a> {
    inner: Density,
    energy: f64,
    f: &'a TestFunction,
    tol: f64,
}

impl Evaluator<'_> {
    /// ∫ sin θ · n(E − 2cos θ) · g(θ) over [t0, t1], split at the angles
    /// where the argument crosses a van Hove point of n.
    fn piece<G: Fn(f64) -> f64>(&self, t0: f64, t1: f64, g: G) -> f64 {
        if !(t0 < t1) {
            return 0.0;
        }
        let edge = 2.0 * self.inner.dim() as f64;
        let mut cuts = vec![t0];
        for v in self.inner.van_hove() {
            let c = 0.5 * (self.energy - v);
            if c > -1.0 && c < 1.0 {
                let t = c.acos();
                if t > t0 && t < t1 {
                    cuts.push(t);
                }
            }
        }
        cuts.push(t1);
        cuts.sort_by(f64::total_cmp);
        let mut total = 0.0;
        for w in cuts.windows(2) {
            let mid = self.energy - 2.0 * (0.5 * (w[0] + w[1])).cos();
            if mid.abs() >= edge {
                continue;
            }
            total += tanh_sinh(w[0], w[1], self.tol, 12, |t| {
                t.sin() * finite_or_zero(self.inner.value(self.energy - 2.0 * t.cos())) * g(t)
            })
            .value;
        }
        total
    }

    fn zero_term(&self) -> f64 {
        let f0 = self.f.eval(0.0);
        if f0 == 0.0 {
            return 0.0;
        }
        f0 * self.piece(0.0, PI, |_| 1.0)
    }

    /// T_k for k ≠ 0: only angles with πk sin θ inside the support count.
    fn term(&self, k: i64) -> f64 {
        let (lo, hi) = self.f.support();
        let scale = PI * k as f64;
        let (mut s0, mut s1) = (lo / scale, hi / scale);
        if k < 0 {
            (s0, s1) = (s1, s0);
        }
        let (s0, s1) = (s0.max(0.0), s1.min(1.0));
        if !(s0 < s1) {
            return 0.0;
        }
        let (a0, a1) = (s0.asin(), s1.asin());
        let g = |t: f64| self.f.eval(scale * t.sin());
        self.piece(a0, a1, g) + self.piece(PI - a1, PI - a0, g)
    }
}

// Σ_{j>n} 1/j², asymptotic expansion (error below n^{−7}).
fn inverse_square_tail(n: usize) -> f64 {
    let x = n as f64;
    1.0 / x - 0.5 / (x * x) + 1.0 / (6.0 * x * x * x) - 1.0 / (30.0 * x.powi(5))
}

fn evaluate(spec: &ConjectureSpec, f: &TestFunction) -> Result<(f64, f64, f64)> {
    let mut inner = Density::new(spec.dim - 1)?;
    if spec.dim > 3 {
        inner = inner.tabulated(spec.table_nodes)?;
    }
    let ev = Evaluator {
        inner,
        energy: spec.energy,
        f,
        tol: spec.theta_tol,
    };
    let zero = ev.zero_term();
    let pairs: Vec<f64> = (1..=spec.k_max as i64)
        .into_par_iter()
        .map(|k| ev.term(k) + ev.term(-k))
        .collect();
    let mut sum = zero;
    for p in &pairs {
        sum += p;
    }
    // For large |k| only sin θ ≲ 1/k contributes and the pair sum decays like
    // A/k²; extrapolate the remainder from the last explicit pair.
    let last = *pairs.last().unwrap();
    let n = spec.k_max;
    let tail = last * (n * n) as f64 * inverse_square_tail(n);
    Ok((sum + tail, zero, tail))
}

/// Evaluate the conjectured limit against `f`, refining until two successive
/// evaluations agree to `spec.target` (relative).
pub fn conjecture_integral(spec: &ConjectureSpec, f: &TestFunction) -> Result<ConjectureValue> {
    spec.validate()?;
    if spec.dim < 4 {
        warn!(
            "conjecture evaluated at d = {} < 4, outside the regime it is stated for",
            spec.dim
        );
    }
    if f.amplitude() == 0.0 {
        return Ok(ConjectureValue {
            value: 0.0,
            self_convergence: 0.0,
            k_max: spec.k_max,
            theta_tol: spec.theta_tol,
            table_nodes: spec.table_nodes,
            zero_term: 0.0,
            tail: 0.0,
        });
    }
    let mut current = *spec;
    let (mut value, _, _) = evaluate(&current, f)?;
    let mut history = vec![value];
    for _ in 0..spec.max_refinements {
        let next = current.refined();
        let (v, zero_term, tail) = evaluate(&next, f)?;
        let change = (v - value).abs() / v.abs().max(f64::MIN_POSITIVE);
        history.push(v);
        current = next;
        value = v;
        if change <= spec.target {
            return Ok(ConjectureValue {
                value,
                self_convergence: change,
                k_max: current.k_max,
                theta_tol: current.theta_tol,
                table_nodes: current.table_nodes,
                zero_term,
                tail,
            });
        }
    }
    Err(Error::Numerical(format!(
        "conjecture integral did not settle to {} relative; values under refinement: {history:?}",
        spec.target
    )))
}

/// ½ N_{d−1}((E − 2, E + 2)): the θ-integral of the k = 0 term with f ≡ 1,
/// via the substitution y = E − 2cos θ.
pub fn zero_term_reference(dim: usize, energy: f64) -> Result<f64> {
    Ok(0.5 * ids(dim - 1, energy - 2.0, energy + 2.0)?)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonRow {
    /// Cube half-width, or `None` for the conjectured limit.
    pub half_width: Option<usize>,
    pub value: f64,
    pub self_convergence: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConjectureComparison {
    pub dim: usize,
    pub energy: f64,
    pub rows: Vec<ComparisonRow>,
}

impl ConjectureComparison {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("L_or_limit,value,self_convergence\n");
        for row in &self.rows {
            let label = row.half_width.map_or("limit".to_string(), |l| l.to_string());
            let sc = row.self_convergence.map_or(String::new(), fmt_num);
            writeln!(out, "{label},{},{sc}", fmt_num(row.value)).unwrap();
        }
        out
    }
}

/// ∫ f dμ⁰_{L,E} for each L next to the conjectured limit. Exploratory:
/// nothing is asserted about agreement.
pub fn conjecture_comparison(
    spec: &ConjectureSpec,
    f: &TestFunction,
    half_widths: &[usize],
) -> Result<ConjectureComparison> {
    let limit = conjecture_integral(spec, f)?;
    let mut rows = Vec::with_capacity(half_widths.len() + 1);
    for &l in half_widths {
        let measure = free_measure(spec.dim, l, spec.energy, f.reach())?;
        rows.push(ComparisonRow {
            half_width: Some(l),
            value: integrate(&measure, f),
            self_convergence: None,
        });
    }
    rows.push(ComparisonRow {
        half_width: None,
        value: limit.value,
        self_convergence: Some(limit.self_convergence),
    });
    Ok(ConjectureComparison {
        dim: spec.dim,
        energy: spec.energy,
        rows,
    })
}
