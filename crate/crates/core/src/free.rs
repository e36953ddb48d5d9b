//! Closed-form spectrum of the free Laplacian Δ_L on the cube.
//!
//! The one-dimensional Dirichlet chain on {-L, …, L} has eigenvalues
//! 2cos θ_j with θ_j = jπ/(2(L+1)), j = 1, …, 2L+1, and the d-dimensional
//! spectrum consists of all sums of d such values.

use std::f64::consts::PI;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::io::format::fmt_num;

/// Absolute tolerance under which two eigenvalues count as equal.
pub const GROUPING_TOL: f64 = 1e-9;

/// Default ceiling on the number of eigenvalues a single enumeration may emit.
pub const DEFAULT_ENUMERATION_CAP: u64 = 60_000_000;

/// Angles θ_j = jπ/(2(L+1)), j ∈ {1, …, 2L+1}, and the values 2cos θ_j.
///
/// Values are reflected exactly: value(2L+2−j) = −value(j) and
/// value(L+1) = 0, so the computed spectrum is symmetric bit for bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AngleGrid {
    half_width: usize,
}

impl AngleGrid {
    pub fn new(half_width: usize) -> Self {
        AngleGrid { half_width }
    }

    pub fn half_width(&self) -> usize {
        self.half_width
    }

    /// Number of indices, 2L+1.
    pub fn len(&self) -> usize {
        2 * self.half_width + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn angle(&self, j: usize) -> f64 {
        j as f64 * PI / (2.0 * (self.half_width + 1) as f64)
    }

    pub fn value(&self, j: usize) -> f64 {
        let mid = self.half_width + 1;
        match j.cmp(&mid) {
            std::cmp::Ordering::Less => 2.0 * self.angle(j).cos(),
            std::cmp::Ordering::Equal => 0.0,
            std::cmp::Ordering::Greater => -2.0 * self.angle(2 * mid - j).cos(),
        }
    }

    /// Largest value, 2cos θ_1.
    pub fn top(&self) -> f64 {
        self.value(1)
    }

    pub fn values(&self) -> Vec<f64> {
        (1..=self.len()).map(|j| self.value(j)).collect()
    }

    /// Inclusive index range of the j with value(j) ∈ [a, b].
    ///
    /// O(1): inverts the monotone map j ↦ 2cos θ_j through arccos, then
    /// corrects the two boundary indices by direct comparison.
    pub fn index_range(&self, a: f64, b: f64) -> Option<(usize, usize)> {
        let n = self.len();
        if !(a <= b) || a > self.value(1) || b < self.value(n) {
            return None;
        }
        let scale = 2.0 * (self.half_width + 1) as f64 / PI;
        let acos_half = |x: f64| (x / 2.0).clamp(-1.0, 1.0).acos();
        let clamp_index = |x: f64| -> usize {
            if x.is_nan() || x < 1.0 {
                1
            } else if x > n as f64 {
                n
            } else {
                x as usize
            }
        };
        let mut lo = clamp_index((scale * acos_half(b)).ceil());
        let mut hi = clamp_index((scale * acos_half(a)).floor());
        while lo > 1 && self.value(lo - 1) <= b {
            lo -= 1;
        }
        while lo <= n && self.value(lo) > b {
            lo += 1;
        }
        while hi < n && self.value(hi + 1) >= a {
            hi += 1;
        }
        while hi >= 1 && self.value(hi) < a {
            hi -= 1;
        }
        (lo <= hi && lo <= n && hi >= 1).then_some((lo, hi))
    }
}

/// Eigenfunction φ_{j,L} of the 1-d chain (un-normalized).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eigenfunction1d {
    index: usize,
    grid: AngleGrid,
}

impl Eigenfunction1d {
    /// φ(m) = cos(θ_j m) for odd j, sin(θ_j m) for even j.
    pub fn eval(&self, m: i64) -> f64 {
        let arg = self.grid.angle(self.index) * m as f64;
        if self.index % 2 == 1 {
            arg.cos()
        } else {
            arg.sin()
        }
    }

    /// Values on m = -L, …, L.
    pub fn values(&self) -> Vec<f64> {
        let l = self.grid.half_width() as i64;
        (-l..=l).map(|m| self.eval(m)).collect()
    }
}

/// Eigenvalue 2cos θ_{j,L} and its eigenfunction.
pub fn eigen_1d(j: usize, half_width: usize) -> Result<(f64, Eigenfunction1d)> {
    let grid = AngleGrid::new(half_width);
    if j == 0 || j > grid.len() {
        return Err(Error::IndexOutOfRange {
            index: j,
            max: grid.len(),
        });
    }
    Ok((grid.value(j), Eigenfunction1d { index: j, grid }))
}

/// #{j : 2cos θ_{j,L} ∈ [a, b]}.
pub fn count_1d_window(half_width: usize, a: f64, b: f64) -> usize {
    AngleGrid::new(half_width)
        .index_range(a, b)
        .map_or(0, |(lo, hi)| hi - lo + 1)
}

/// The interval J = [c − h, c + h] with c = (E−λ)/2, h = K/(2(L+1)).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralWindow {
    pub lo: f64,
    pub hi: f64,
}

impl SpectralWindow {
    pub fn new(energy: f64, lambda: f64, window: f64, half_width: usize) -> Self {
        let c = 0.5 * (energy - lambda);
        let h = window / (2.0 * (half_width + 1) as f64);
        SpectralWindow { lo: c - h, hi: c + h }
    }

    /// Intersection with [-1, 1]; `None` when empty.
    pub fn clipped(&self) -> Option<SpectralWindow> {
        let lo = self.lo.max(-1.0);
        let hi = self.hi.min(1.0);
        (lo <= hi).then_some(SpectralWindow { lo, hi })
    }

    /// Number of integers k with cos(kπ/(2(L+1))) ∈ J, i.e. integers in the
    /// arccos image of J ∩ [−1, 1] scaled by 2(L+1)/π.
    pub fn index_count(&self, half_width: usize) -> usize {
        self.clipped()
            .map_or(0, |w| count_1d_window(half_width, 2.0 * w.lo, 2.0 * w.hi))
    }
}

/// Eigenvalues of Δ_L near E, rescaled to x = (L+1)(λ − E), with
/// multiplicities.
#[derive(Debug, Clone, PartialEq)]
pub struct FreeAtomList {
    pub dim: usize,
    pub half_width: usize,
    pub energy: f64,
    pub window: f64,
    /// (position, multiplicity), sorted by position.
    pub atoms: Vec<(f64, usize)>,
}

impl FreeAtomList {
    pub fn total_multiplicity(&self) -> usize {
        self.atoms.iter().map(|a| a.1).sum()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("position,multiplicity\n");
        for &(x, m) in &self.atoms {
            writeln!(out, "{},{}", fmt_num(x), m).unwrap();
        }
        out
    }
}

/// Sort and merge values equal within `tol` (measured from each group's
/// first member). Groups are reported by the midpoint of their extremes.
pub(crate) fn group_values(mut values: Vec<f64>, tol: f64) -> Vec<(f64, usize)> {
    values.sort_by(f64::total_cmp);
    let mut out: Vec<(f64, usize)> = Vec::new();
    let mut i = 0;
    while i < values.len() {
        let first = values[i];
        let mut j = i + 1;
        while j < values.len() && values[j] - first <= tol {
            j += 1;
        }
        out.push((0.5 * (first + values[j - 1]), j - i));
        i = j;
    }
    out
}

/// Every d-tuple sum in [lo, hi], by recursion over the leading indices with
/// pruning against the range the remaining coordinates can still reach.
fn window_sums(dim: usize, grid: &AngleGrid, lo: f64, hi: f64, cap: u64) -> Result<Vec<f64>> {
    struct Walk<'a> {
        grid: &'a AngleGrid,
        lo: f64,
        hi: f64,
        top: f64,
        cap: u64,
        out: Vec<f64>,
    }
    impl Walk<'_> {
        fn go(&mut self, remaining: usize, partial: f64) -> Result<()> {
            let reach = (remaining - 1) as f64 * self.top;
            let slack = 1e-12 * (1.0 + self.top * remaining as f64);
            let a = self.lo - partial - reach - slack;
            let b = self.hi - partial + reach + slack;
            let Some((j0, j1)) = self.grid.index_range(a, b) else {
                return Ok(());
            };
            for j in j0..=j1 {
                let s = partial + self.grid.value(j);
                if remaining == 1 {
                    if s >= self.lo && s <= self.hi {
                        if self.out.len() as u64 >= self.cap {
                            return Err(Error::ResourceLimit {
                                what: "free window enumeration (atom cap)",
                                needed: self.out.len() as u128 + 1,
                                cap: self.cap as u128,
                            });
                        }
                        self.out.push(s);
                    }
                } else {
                    self.go(remaining - 1, s)?;
                }
            }
            Ok(())
        }
    }
    let mut walk = Walk {
        grid,
        lo,
        hi,
        top: grid.top(),
        cap,
        out: Vec::new(),
    };
    walk.go(dim, 0.0)?;
    Ok(walk.out)
}

/// All eigenvalues λ of Δ_L with (L+1)|λ − E| ≤ K, as rescaled atoms.
pub fn enumerate_window(dim: usize, half_width: usize, energy: f64, window: f64, cap: u64) -> Result<FreeAtomList> {
    if dim == 0 || half_width == 0 {
        return Err(Error::Config("enumeration needs d ≥ 1 and L ≥ 1".into()));
    }
    if !(window > 0.0) {
        return Err(Error::Config(format!("window half-width must be > 0, got {window}")));
    }
    let bound = 2.0 * dim as f64;
    if !(energy.abs() <= bound) {
        return Err(Error::Config(format!(
            "E = {energy} outside [-2d, 2d] = [{}, {bound}]",
            -bound
        )));
    }
    let scale = (half_width + 1) as f64;
    let grid = AngleGrid::new(half_width);
    let lo = energy - window / scale;
    let hi = energy + window / scale;
    let sums = window_sums(dim, &grid, lo, hi, cap)?;
    let atoms = group_values(sums, GROUPING_TOL)
        .into_iter()
        .map(|(lambda, m)| (scale * (lambda - energy), m))
        .collect();
    Ok(FreeAtomList {
        dim,
        half_width,
        energy,
        window,
        atoms,
    })
}

/// All (2L+1)^d closed-form eigenvalues of Δ_L, unsorted, index order.
pub fn all_eigenvalues(dim: usize, half_width: usize, cap: u64) -> Result<Vec<f64>> {
    let grid = AngleGrid::new(half_width);
    let n = grid.len();
    let total = (n as u128).checked_pow(dim as u32).unwrap_or(u128::MAX);
    if total > cap as u128 {
        return Err(Error::ResourceLimit {
            what: "closed-form spectrum",
            needed: total,
            cap: cap as u128,
        });
    }
    let values = grid.values();
    let mut out = vec![0.0];
    for _ in 0..dim {
        let mut next = Vec::with_capacity(out.len() * n);
        for &s in &out {
            for &v in &values {
                next.push(s + v);
            }
        }
        out = next;
    }
    Ok(out)
}

/// Outcome of checking Tr E({λ}) ≤ d(2L+1)^{d-1} on one cube.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiplicityAudit {
    pub dim: usize,
    pub half_width: usize,
    pub max_multiplicity: usize,
    /// Eigenvalue (or rescaled position) where the maximum occurs.
    pub at: f64,
    pub bound: usize,
    pub passed: bool,
}

pub fn multiplicity_audit(dim: usize, half_width: usize, cap: u64) -> Result<MultiplicityAudit> {
    audit(dim, half_width, None, cap)
}

/// The same audit on (L+1)(Δ_L − E); grouping tolerance scales with L+1.
pub fn multiplicity_audit_rescaled(dim: usize, half_width: usize, energy: f64, cap: u64) -> Result<MultiplicityAudit> {
    audit(dim, half_width, Some(energy), cap)
}

fn audit(dim: usize, half_width: usize, energy: Option<f64>, cap: u64) -> Result<MultiplicityAudit> {
    let mut values = all_eigenvalues(dim, half_width, cap)?;
    let mut tol = GROUPING_TOL;
    if let Some(e) = energy {
        let scale = (half_width + 1) as f64;
        for v in &mut values {
            *v = scale * (*v - e);
        }
        tol *= scale;
    }
    let (at, max_multiplicity) =
        group_values(values, tol)
            .into_iter()
            .fold((f64::NAN, 0), |best, g| if g.1 > best.1 { g } else { best });
    let bound = dim * (2 * half_width + 1).pow(dim as u32 - 1);
    Ok(MultiplicityAudit {
        dim,
        half_width,
        max_multiplicity,
        at,
        bound,
        passed: max_multiplicity <= bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::SQRT_2;

    #[test]
    fn eigen_1d_examples() {
        let (v, phi) = eigen_1d(2, 1).unwrap();
        assert!(v.abs() < 1e-15);
        assert!((phi.eval(1) - 1.0).abs() < 1e-15);
        let (v, _) = eigen_1d(1, 1).unwrap();
        assert!((v - SQRT_2).abs() < 1e-15);
        let (_, phi) = eigen_1d(1, 3).unwrap();
        assert!((phi.eval(2) - SQRT_2 / 2.0).abs() < 1e-15);
        assert!(eigen_1d(0, 3).is_err());
        assert!(eigen_1d(8, 3).is_err());
    }

    #[test]
    fn eigenfunction_residuals() {
        for l in [1usize, 3, 7] {
            for j in 1..=2 * l + 1 {
                let (lambda, phi) = eigen_1d(j, l).unwrap();
                let u = phi.values();
                let n = u.len();
                let mut res = 0.0f64;
                for i in 0..n {
                    let left = if i > 0 { u[i - 1] } else { 0.0 };
                    let right = if i + 1 < n { u[i + 1] } else { 0.0 };
                    res = res.max((left + right - lambda * u[i]).abs());
                }
                assert!(res <= 1e-12, "j={j} L={l} residual {res}");
            }
        }
    }

    #[test]
    fn angle_grid_monotone_and_symmetric() {
        let g = AngleGrid::new(6);
        let v = g.values();
        for w in v.windows(2) {
            assert!(w[0] > w[1]);
        }
        for j in 1..=g.len() {
            assert_eq!(g.value(j), -g.value(g.len() + 1 - j));
        }
    }

    #[test]
    fn count_examples() {
        assert_eq!(count_1d_window(1, -0.5, 1.5), 2);
        assert_eq!(count_1d_window(3, -2.0, 2.0), 7);
        assert_eq!(count_1d_window(100, 2.1, 3.0), 0);
        assert_eq!(count_1d_window(5, 1.0, 0.0), 0);
    }

    #[test]
    fn count_matches_brute_force_at_exact_values() {
        for l in [1usize, 2, 5, 12] {
            let g = AngleGrid::new(l);
            let vals = g.values();
            for &a in &vals {
                for &b in &vals {
                    let brute = vals.iter().filter(|&&v| v >= a && v <= b).count();
                    assert_eq!(count_1d_window(l, a, b), brute, "L={l} [{a}, {b}]");
                }
            }
        }
    }

    #[test]
    fn spectral_window_clipping() {
        let w = SpectralWindow { lo: -1.5, hi: 0.2 };
        let c = w.clipped().unwrap();
        assert_eq!((c.lo, c.hi), (-1.0, 0.2));
        assert_eq!(c.clipped(), Some(c));
        assert_eq!(SpectralWindow { lo: 1.2, hi: 1.5 }.clipped(), None);
        // E = 1, λ = 0, K = 2, L = 1: J = [0, 1] → 2cos θ ∈ [0, 2]: j = 1, 2.
        assert_eq!(SpectralWindow::new(1.0, 0.0, 2.0, 1).index_count(1), 2);
    }

    #[test]
    fn window_examples() {
        let w = enumerate_window(1, 1, 0.0, 10.0, DEFAULT_ENUMERATION_CAP).unwrap();
        let expect = [(-2.0 * 2f64.sqrt(), 1), (0.0, 1), (2.0 * 2f64.sqrt(), 1)];
        assert_eq!(w.atoms.len(), 3);
        for (a, e) in w.atoms.iter().zip(expect) {
            assert!((a.0 - e.0).abs() < 1e-12);
            assert_eq!(a.1, e.1);
        }

        let w = enumerate_window(2, 1, 0.0, 3.0, DEFAULT_ENUMERATION_CAP).unwrap();
        let got: Vec<usize> = w.atoms.iter().map(|a| a.1).collect();
        assert_eq!(got, vec![2, 3, 2]);
        assert!((w.atoms[0].0 + 2.0 * SQRT_2).abs() < 1e-12);
        assert!(w.atoms[1].0.abs() < 1e-12);

        // Near the top edge only (j₁, j₂) = (1, 1) is reachable, at
        // x = 2(2√2 − 4) ≈ −2.343; it needs K ≥ 2.343 to be inside.
        let w = enumerate_window(2, 1, 4.0, 1.0, DEFAULT_ENUMERATION_CAP).unwrap();
        assert!(w.atoms.is_empty());
        let w = enumerate_window(2, 1, 4.0, 2.5, DEFAULT_ENUMERATION_CAP).unwrap();
        assert_eq!(w.atoms.len(), 1);
        assert_eq!(w.atoms[0].1, 1);
        assert!((w.atoms[0].0 - 2.0 * (2.0 * SQRT_2 - 4.0)).abs() < 1e-12);
    }

    #[test]
    fn window_matches_brute_force_filter() {
        for (d, l, e, k) in [
            (2usize, 4usize, 1.3, 2.5),
            (3, 3, -4.2, 3.0),
            (3, 5, 0.0, 1.0),
            (4, 2, 5.5, 4.0),
        ] {
            let all = all_eigenvalues(d, l, 1 << 20).unwrap();
            let s = (l + 1) as f64;
            let mut brute: Vec<f64> = all.into_iter().filter(|&v| s * (v - e).abs() <= k).collect();
            brute.sort_by(f64::total_cmp);
            let w = enumerate_window(d, l, e, k, DEFAULT_ENUMERATION_CAP).unwrap();
            assert_eq!(w.total_multiplicity(), brute.len(), "d={d} L={l}");
            let expanded: Vec<f64> = w
                .atoms
                .iter()
                .flat_map(|&(x, m)| std::iter::repeat_n(x / s + e, m))
                .collect();
            for (a, b) in expanded.iter().zip(&brute) {
                assert!((a - b).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn window_symmetric_at_zero_energy() {
        let w = enumerate_window(3, 4, 0.0, 5.0, DEFAULT_ENUMERATION_CAP).unwrap();
        let n = w.atoms.len();
        for i in 0..n {
            let (x, m) = w.atoms[i];
            let (y, k) = w.atoms[n - 1 - i];
            assert_eq!(x, -y);
            assert_eq!(m, k);
        }
    }

    #[test]
    fn cap_is_enforced() {
        match enumerate_window(3, 6, 0.0, 100.0, 50) {
            Err(Error::ResourceLimit { cap, .. }) => assert_eq!(cap, 50),
            other => panic!("expected resource error, got {other:?}"),
        }
        assert!(multiplicity_audit(3, 20, 1000).is_err());
    }

    #[test]
    fn audit_examples() {
        let a = multiplicity_audit(1, 5, DEFAULT_ENUMERATION_CAP).unwrap();
        assert_eq!((a.max_multiplicity, a.bound, a.passed), (1, 1, true));
        let a = multiplicity_audit(2, 1, DEFAULT_ENUMERATION_CAP).unwrap();
        assert_eq!((a.max_multiplicity, a.bound, a.passed), (3, 6, true));
        assert!(a.at.abs() < 1e-12);
    }

    #[test]
    fn audit_d3_l2_matches_index_grouping() {
        // Brute force over the 125 index triples: group by the multiset of
        // |j − (L+1)| reflections is not enough in general, so compare against
        // direct pairwise equality counting.
        let vals = all_eigenvalues(3, 2, 1000).unwrap();
        let brute_max = vals
            .iter()
            .map(|&v| vals.iter().filter(|&&w| (w - v).abs() <= GROUPING_TOL).count())
            .max()
            .unwrap();
        let a = multiplicity_audit(3, 2, DEFAULT_ENUMERATION_CAP).unwrap();
        assert_eq!(a.max_multiplicity, brute_max);
        assert!(a.max_multiplicity <= 75 && a.passed);
        let r = multiplicity_audit_rescaled(3, 2, 1.7, DEFAULT_ENUMERATION_CAP).unwrap();
        assert_eq!(r.max_multiplicity, a.max_multiplicity);
    }
}
