use std::f64::consts::PI;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::io::format::fmt_num;
use crate::quad::{tanh_sinh, tanh_sinh_offsets};

const REL_TOL: f64 = 1e-12;
const MAX_LEVEL: usize = 9;

/// Default Chebyshev nodes per van Hove interval in a tabulated density.
pub const DEFAULT_TABLE_NODES: usize = 64;

/// 1/(π√(4 − E²)), the density of 2cos θ for uniform θ ∈ [0, π].
pub fn dos_1d(energy: f64) -> Result<f64> {
    if !(energy.abs() < 2.0) {
        return Err(Error::Domain(format!("1-d density needs |E| < 2, got {energy}")));
    }
    Ok(line(energy))
}

fn line(e: f64) -> f64 {
    let e = e.abs();
    if e >= 2.0 {
        return if e == 2.0 { f64::INFINITY } else { 0.0 };
    }
    1.0 / (PI * ((2.0 - e) * (2.0 + e)).sqrt())
}

/// 2(r − 2m) for m = r, …, 0: the energies where n_r is not analytic,
/// including the band edges ±2r.
pub fn van_hove_points(r: usize) -> Vec<f64> {
    (0..=r).map(|m| 2.0 * (2 * m) as f64 - 2.0 * r as f64).collect()
}

/// Angles θ ∈ [0, π] splitting E − 2cos θ at the given energies, together
/// with 0 and π, ascending.
fn angle_breaks(energy: f64, points: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0];
    for &v in points {
        let c = 0.5 * (energy - v);
        if c > -1.0 && c < 1.0 {
            out.push(c.acos());
        }
    }
    out.push(PI);
    out.sort_by(f64::total_cmp);
    out.dedup();
    out
}

/// Density of a sum of r independent 2cos(uniform angle) variables, i.e. the
/// density of states of the free Laplacian on ℤ^r at the origin.
#[derive(Debug, Clone)]
pub struct Density {
    r: usize,
    kind: Kind,
}

#[derive(Debug, Clone)]
enum Kind {
    Line,
    Square,
    Convolved(Box<Density>),
    Table(ChebTable),
}

impl Density {
    /// Exact representation: closed form for r = 1, a singularity-aware
    /// angle integral for r = 2 and nested angle integrals above, with the
    /// innermost level of r ≥ 4 tabulated.
    pub fn new(r: usize) -> Result<Self> {
        let kind = match r {
            0 => return Err(Error::Domain("density needs r ≥ 1".into())),
            1 => Kind::Line,
            2 => Kind::Square,
            3 => Kind::Convolved(Box::new(Density::new(2)?)),
            _ => Kind::Convolved(Box::new(Density::new(r - 1)?.tabulated(DEFAULT_TABLE_NODES)?)),
        };
        Ok(Density { r, kind })
    }

    /// A version cheap to evaluate many times. For r ≥ 3 this is a
    /// Chebyshev interpolant in the angle variable of each van Hove interval,
    /// which absorbs the square-root edges; r ≤ 2 is already cheap.
    pub fn tabulated(self, nodes: usize) -> Result<Self> {
        if self.r < 3 || matches!(self.kind, Kind::Table(_)) {
            return Ok(self);
        }
        let table = ChebTable::build(&self, nodes);
        Ok(Density {
            r: self.r,
            kind: Kind::Table(table),
        })
    }

    pub fn dim(&self) -> usize {
        self.r
    }

    pub fn van_hove(&self) -> Vec<f64> {
        van_hove_points(self.r)
    }

    /// n_r(E); 0 outside [−2r, 2r]. Even in E by construction.
    pub fn value(&self, energy: f64) -> f64 {
        let e = energy.abs();
        if e > 2.0 * self.r as f64 {
            return 0.0;
        }
        match &self.kind {
            Kind::Line => line(e),
            Kind::Square => square(e),
            Kind::Convolved(inner) => convolve(inner, e),
            Kind::Table(t) => t.eval(e),
        }
    }

    /// ∫ n_r over [a, b], by tanh-sinh between consecutive van Hove points.
    pub fn integrate(&self, a: f64, b: f64) -> f64 {
        let r = 2.0 * self.r as f64;
        let (a, b) = (a.max(-r), b.min(r));
        if !(a < b) {
            return 0.0;
        }
        if let Kind::Convolved(inner) = &self.kind {
            if matches!(inner.kind, Kind::Square) {
                // Direct n_3 nests two adaptive rules; integrate its table.
                return match self.clone().tabulated(DEFAULT_TABLE_NODES) {
                    Ok(t) => t.integrate(a, b),
                    Err(_) => f64::NAN,
                };
            }
        }
        let mut cuts = vec![a];
        cuts.extend(self.van_hove().into_iter().filter(|&v| v > a && v < b));
        cuts.push(b);
        cuts.windows(2)
            .map(|w| tanh_sinh(w[0], w[1], REL_TOL, MAX_LEVEL, |e| finite_or_zero(self.value(e))).value)
            .sum()
    }
}

/// n_2(E) = (1/π²) ∫ dθ / √((2 + y)(2 − y)), y = E − 2cos θ, for E ≥ 0.
///
/// For E > 0 the integrand lives on [0, θ_b] with 2cos θ_b = E − 2; the
/// vanishing factor is written as a product of sines of the exact offset
/// from θ_b so the endpoint singularity is resolved without cancellation.
fn square(e: f64) -> f64 {
    if e == 0.0 {
        return f64::INFINITY;
    }
    if e >= 4.0 {
        return 0.0;
    }
    let tb = (0.5 * (e - 2.0)).acos();
    let integral = tanh_sinh_offsets(0.0, tb, REL_TOL, MAX_LEVEL, |theta, _, right| {
        let s = (0.5 * theta).sin();
        let plus = e + 4.0 * s * s;
        let minus = 4.0 * (0.5 * (theta + tb)).sin() * (0.5 * right).sin();
        1.0 / (plus * minus).sqrt()
    });
    integral.value / (PI * PI)
}

/// (1/π) ∫_0^π n_{r−1}(E − 2cos θ) dθ, split where the argument crosses a
/// van Hove point of n_{r−1}.
fn convolve(inner: &Density, e: f64) -> f64 {
    let points = inner.van_hove();
    let breaks = angle_breaks(e, &points);
    let edge = 2.0 * inner.r as f64;
    let mut total = 0.0;
    for w in breaks.windows(2) {
        let mid = e - 2.0 * (0.5 * (w[0] + w[1])).cos();
        if mid.abs() >= edge {
            continue;
        }
        total += tanh_sinh(w[0], w[1], REL_TOL, MAX_LEVEL, |t| {
            finite_or_zero(inner.value(e - 2.0 * t.cos()))
        })
        .value;
    }
    total / PI
}

/// A node that rounds exactly onto the logarithmic singularity of n_2 is
/// dropped; it carries no mass.
pub(crate) fn finite_or_zero(v: f64) -> f64 {
    if v.is_finite() {
        v
    } else {
        0.0
    }
}

/// Piecewise Chebyshev interpolant of an even density on [0, 2r], one
/// polynomial per van Hove interval in the variable φ with
/// y = a + (b − a)(1 − cos φ)/2.
#[derive(Debug, Clone)]
struct ChebTable {
    intervals: Vec<(f64, f64, Vec<f64>)>,
}

impl ChebTable {
    fn build(source: &Density, nodes: usize) -> Self {
        let n = nodes.max(2);
        let points: Vec<f64> = source.van_hove().into_iter().filter(|&v| v >= 0.0).collect();
        // r odd has no van Hove point at 0; start the first interval there.
        let mut cuts = if points.first() == Some(&0.0) {
            vec![]
        } else {
            vec![0.0]
        };
        cuts.extend(points);
        let intervals = cuts
            .windows(2)
            .map(|w| {
                let (a, b) = (w[0], w[1]);
                let values = (0..=n).map(|j| source.value(Self::node_energy(a, b, j, n))).collect();
                (a, b, values)
            })
            .collect();
        ChebTable { intervals }
    }

    // s_j = cos(jπ/n) ∈ [−1, 1] ↦ φ = π(1 + s)/2 ↦ y.
    fn node_energy(a: f64, b: f64, j: usize, n: usize) -> f64 {
        let s = (j as f64 * PI / n as f64).cos();
        let phi = 0.5 * PI * (1.0 + s);
        a + (b - a) * 0.5 * (1.0 - phi.cos())
    }

    fn eval(&self, e: f64) -> f64 {
        let Some((a, b, values)) = self.intervals.iter().find(|(a, b, _)| e >= *a && e <= *b) else {
            return 0.0;
        };
        let n = values.len() - 1;
        let c = (1.0 - 2.0 * (e - a) / (b - a)).clamp(-1.0, 1.0);
        let s = 2.0 * c.acos() / PI - 1.0;
        // Barycentric formula on Chebyshev–Lobatto points.
        let (mut num, mut den) = (0.0, 0.0);
        for (j, &v) in values.iter().enumerate() {
            let sj = (j as f64 * PI / n as f64).cos();
            let d = s - sj;
            if d == 0.0 {
                return v;
            }
            let mut w = if j % 2 == 0 { 1.0 } else { -1.0 };
            if j == 0 || j == n {
                w *= 0.5;
            }
            num += w * v / d;
            den += w / d;
        }
        num / den
    }
}

/// n_r sampled on the cell midpoints of a uniform grid over [−2r, 2r].
#[derive(Debug, Clone, PartialEq)]
pub struct DensityGrid {
    pub r: usize,
    pub energies: Vec<f64>,
    pub values: Vec<f64>,
    /// ∫ n_r by singularity-aware quadrature of the evaluator.
    pub normalization: f64,
    /// Midpoint-rule integral of the grid values (coarse for r ≤ 2).
    pub grid_integral: f64,
    /// max |n(E) − n(−E)| over the grid.
    pub symmetry_error: f64,
}

impl DensityGrid {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("E,n\n");
        for (e, v) in self.energies.iter().zip(&self.values) {
            writeln!(out, "{},{}", fmt_num(*e), fmt_num(*v)).unwrap();
        }
        out
    }
}

/// Evaluate n_r on `grid_size` midpoints and check its normalization.
///
/// An odd grid puts a point at E = 0, where n_2 is infinite; that value is
/// reported as `inf` and left out of `grid_integral`.
pub fn dos_grid(r: usize, grid_size: usize) -> Result<DensityGrid> {
    if grid_size < 2 {
        return Err(Error::Config(format!("density grid needs ≥ 2 points, got {grid_size}")));
    }
    let density = Density::new(r)?.tabulated(DEFAULT_TABLE_NODES)?;
    let edge = 2.0 * r as f64;
    let h = 2.0 * edge / grid_size as f64;
    // Symmetric about 0 by construction: E_i = −E_{N−1−i} exactly.
    let energies: Vec<f64> = (0..grid_size)
        .map(|i| (i as f64 + 0.5 - 0.5 * grid_size as f64) * h)
        .collect();
    let values: Vec<f64> = energies.iter().map(|&e| density.value(e)).collect();
    let symmetry_error = (0..grid_size)
        .map(|i| (values[i] - values[grid_size - 1 - i]).abs())
        .fold(0.0, f64::max);
    let grid_integral = values.iter().filter(|v| v.is_finite()).sum::<f64>() * h;
    let normalization = density.integrate(-edge, edge);
    if (normalization - 1.0).abs() > 1e-6 {
        return Err(Error::Numerical(format!(
            "n_{r} integrates to {normalization}, not 1 within 1e-6"
        )));
    }
    Ok(DensityGrid {
        r,
        energies,
        values,
        normalization,
        grid_integral,
        symmetry_error,
    })
}

/// P(X_1 ≤ u) = 1 − arccos(u/2)/π.
fn cdf_line(u: f64) -> f64 {
    if u <= -2.0 {
        0.0
    } else if u >= 2.0 {
        1.0
    } else {
        1.0 - (0.5 * u).acos() / PI
    }
}

/// P(X_1 + … + X_r ≤ u) by the angle recursion F_r(u) = (1/π) ∫ F_{r−1}(u − 2cos θ) dθ.
fn cdf(r: usize, u: f64) -> f64 {
    let edge = 2.0 * r as f64;
    if u <= -edge {
        return 0.0;
    }
    if u >= edge {
        return 1.0;
    }
    if r == 1 {
        return cdf_line(u);
    }
    let inner_edge = 2.0 * (r - 1) as f64;
    let breaks = angle_breaks(u, &van_hove_points(r - 1));
    let mut total = 0.0;
    for w in breaks.windows(2) {
        let mid = u - 2.0 * (0.5 * (w[0] + w[1])).cos();
        if mid <= -inner_edge {
            continue;
        }
        if mid >= inner_edge {
            total += w[1] - w[0];
            continue;
        }
        total += tanh_sinh(w[0], w[1], REL_TOL, MAX_LEVEL, |t| cdf(r - 1, u - 2.0 * t.cos())).value;
    }
    total / PI
}

/// N_r((a, b)) = ∫_a^b n_r, clipped to [−2r, 2r].
///
/// r ≤ 3 uses the distribution-function recursion, which never touches the
/// density; larger r integrates the density.
pub fn ids(r: usize, a: f64, b: f64) -> Result<f64> {
    if r == 0 {
        return Err(Error::Domain("integrated density needs r ≥ 1".into()));
    }
    if !(a < b) {
        return Err(Error::Domain(format!("interval ({a}, {b}) is empty")));
    }
    if r <= 3 {
        return Ok(cdf(r, b) - cdf(r, a));
    }
    Ok(Density::new(r)?.integrate(a, b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::free::all_eigenvalues;

    fn agm(mut a: f64, mut b: f64) -> f64 {
        for _ in 0..40 {
            (a, b) = (0.5 * (a + b), (a * b).sqrt());
        }
        a
    }

    #[test]
    fn line_examples() {
        assert!((dos_1d(0.0).unwrap() - 0.15915494309189535).abs() < 1e-15);
        assert_eq!(dos_1d(1.3).unwrap(), dos_1d(-1.3).unwrap());
        assert!(dos_1d(2.0).is_err());
        assert!(dos_1d(-2.5).is_err());
    }

    #[test]
    fn square_matches_elliptic_closed_form() {
        // n_2(E) = 1/(4π·AGM(1, |E|/4)).
        let d = Density::new(2).unwrap();
        for i in 1..400 {
            let e = i as f64 * 0.01;
            let want = 1.0 / (4.0 * PI * agm(1.0, e / 4.0));
            assert!(
                (d.value(e) - want).abs() < 1e-10 * want,
                "E={e}: {} vs {want}",
                d.value(e)
            );
            assert_eq!(d.value(-e), d.value(e));
        }
        assert_eq!(d.value(0.0), f64::INFINITY);
        assert_eq!(d.value(4.5), 0.0);
    }

    #[test]
    fn normalizations() {
        for r in 1..=4 {
            let d = Density::new(r).unwrap();
            let total = d.integrate(-2.0 * r as f64, 2.0 * r as f64);
            assert!((total - 1.0).abs() < 1e-6, "r={r}: {total}");
        }
    }

    #[test]
    fn table_matches_direct() {
        let direct = Density::new(3).unwrap();
        let table = Density::new(3).unwrap().tabulated(DEFAULT_TABLE_NODES).unwrap();
        for i in 0..60 {
            let e = -6.0 + 12.0 * (i as f64 + 0.31) / 60.0;
            let (a, b) = (direct.value(e), table.value(e));
            assert!((a - b).abs() < 1e-9, "E={e}: {a} vs {b}");
        }
        for v in van_hove_points(3) {
            assert!((direct.value(v) - table.value(v)).abs() < 1e-9);
        }
    }

    #[test]
    fn ids_examples() {
        assert!((ids(1, -2.0, 2.0).unwrap() - 1.0).abs() < 1e-12);
        assert!((ids(1, 0.0, 2.0).unwrap() - 0.5).abs() < 1e-12);
        assert!((ids(2, -4.0, 0.0).unwrap() - 0.5).abs() < 1e-10);
        assert!((ids(3, -10.0, 10.0).unwrap() - 1.0).abs() < 1e-10);
        assert!(ids(2, 1.0, 1.0).is_err());
    }

    #[test]
    fn ids_agrees_with_density_integral() {
        for r in 2..=3 {
            let d = Density::new(r).unwrap();
            for (a, b) in [(-1.0, 0.7), (0.3, 3.9), (-5.0, -1.2)] {
                let via_cdf = ids(r, a, b).unwrap();
                let via_density = d.integrate(a, b);
                assert!(
                    (via_cdf - via_density).abs() < 1e-8,
                    "r={r} ({a},{b}): {via_cdf} vs {via_density}"
                );
            }
        }
    }

    #[test]
    fn ids_matches_finite_cube_fraction() {
        let values = all_eigenvalues(3, 6, 1 << 20).unwrap();
        let n = values.len() as f64;
        for (a, b) in [(-6.0, -2.0), (-1.0, 1.5), (2.0, 5.0), (-3.0, 3.0)] {
            let frac = values.iter().filter(|&&v| v > a && v < b).count() as f64 / n;
            let want = ids(3, a, b).unwrap();
            assert!((frac - want).abs() < 0.02, "({a},{b}): {frac} vs {want}");
        }
    }

    #[test]
    fn grid_invariants() {
        for r in 1..=3 {
            let g = dos_grid(r, 200).unwrap();
            assert!(g.values.iter().all(|&v| v >= 0.0));
            assert!(g.symmetry_error <= 1e-8);
            assert!((g.normalization - 1.0).abs() < 1e-6);
        }
        let g = dos_grid(1, 400).unwrap();
        for (e, v) in g.energies.iter().zip(&g.values) {
            if e.abs() < 1.99 {
                assert!((v - dos_1d(*e).unwrap()).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn square_log_growth_near_zero() {
        let d = Density::new(2).unwrap();
        let near: Vec<f64> = [1e-2, 1e-4, 1e-6].iter().map(|&e| d.value(e)).collect();
        assert!(near[0] < near[1] && near[1] < near[2]);
        // Logarithmic: equal increments per factor 100.
        let (d1, d2) = (near[1] - near[0], near[2] - near[1]);
        assert!((d1 - d2).abs() < 0.01 * d1, "{d1} {d2}");
    }
}
