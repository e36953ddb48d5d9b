//! Quadrature and summation helpers shared by the numerical modules.

use std::f64::consts::PI;

/// Pairwise (cascade) summation of `term(0..n)`.
pub fn pairwise_sum_by<F: Fn(usize) -> f64>(n: usize, term: F) -> f64 {
    fn rec<F: Fn(usize) -> f64>(lo: usize, hi: usize, term: &F) -> f64 {
        if hi - lo <= 16 {
            (lo..hi).map(term).sum()
        } else {
            let mid = lo + (hi - lo) / 2;
            rec(lo, mid, term) + rec(mid, hi, term)
        }
    }
    rec(0, n, &term)
}

pub fn pairwise_sum(values: &[f64]) -> f64 {
    pairwise_sum_by(values.len(), |i| values[i])
}

/// Gauss–Legendre rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(order: usize) -> Self {
        assert!(order >= 1);
        let n = order;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// Nodes and weights mapped to [a, b].
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (mid + half * x, half * w))
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        self.mapped(a, b).map(|(x, w)| w * f(x)).sum()
    }

    /// Composite rule over `panels` equal panels of [a, b].
    pub fn composite<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, panels: usize, mut f: F) -> f64 {
        let h = (b - a) / panels as f64;
        let mut total = 0.0;
        for p in 0..panels {
            let lo = a + h * p as f64;
            let hi = if p + 1 == panels { b } else { lo + h };
            total += self.integrate(lo, hi, &mut f);
        }
        total
    }
}

/// P_n(x) and P_n'(x) by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let d = n as f64 * (x * p - p0) / (x * x - 1.0);
    (p, d)
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
}

/// Double-exponential (tanh-sinh) quadrature on [a, b].
///
/// Tolerates integrable endpoint singularities (algebraic or logarithmic);
/// the integrand is never evaluated at the endpoints themselves.
pub fn tanh_sinh<F: FnMut(f64) -> f64>(a: f64, b: f64, rel_tol: f64, max_level: usize, mut f: F) -> Integral {
    // Nodes that round onto an endpoint are dropped.
    tanh_sinh_offsets(
        a,
        b,
        rel_tol,
        max_level,
        |x, _, _| if x == a || x == b { 0.0 } else { f(x) },
    )
}

/// As [`tanh_sinh`], but the integrand also receives the exact distances
/// `x − a` and `b − x`, so singular factors can be evaluated without
/// cancellation.
pub fn tanh_sinh_offsets<F: FnMut(f64, f64, f64) -> f64>(
    a: f64,
    b: f64,
    rel_tol: f64,
    max_level: usize,
    mut f: F,
) -> Integral {
    if b <= a {
        return Integral { value: 0.0, error: 0.0 };
    }
    let width = b - a;
    let half = 0.5 * width;
    // Far enough that endpoint offsets reach ~1e-300.
    let t_max = 6.5;
    let mut pair = |t: f64| -> f64 {
        let s = 0.5 * PI * t.sinh();
        let c = 0.5 * PI * t.cosh();
        // 1 − tanh(s) = 2/(1 + e^{2s}); weight = c / cosh²(s).
        let offset = half * 2.0 / (1.0 + (2.0 * s).exp());
        let cosh_s = s.cosh();
        let w = half * c / (cosh_s * cosh_s);
        if w == 0.0 || !w.is_finite() || offset <= 0.0 {
            return 0.0;
        }
        let mut acc = w * f(a + offset, offset, width - offset);
        if t != 0.0 {
            acc += w * f(b - offset, width - offset, offset);
        }
        acc
    };
    let mut h = 1.0;
    let mut sum = pair(0.0);
    let mut j = 1;
    while j as f64 * h <= t_max {
        sum += pair(j as f64 * h);
        j += 1;
    }
    let mut estimate = sum * h;
    let mut error = f64::INFINITY;
    for _ in 0..max_level {
        h *= 0.5;
        let mut k = 1;
        while k as f64 * h <= t_max {
            sum += pair(k as f64 * h);
            k += 2;
        }
        let next = sum * h;
        error = (next - estimate).abs();
        estimate = next;
        if error <= rel_tol * estimate.abs() || error < 1e-300 {
            break;
        }
    }
    Integral { value: estimate, error }
}

/// Locate a sign change of `f` in [a, b] by bisection; `fa`, `fb` of
/// opposite sign.
pub fn bisect_root<F: FnMut(f64) -> f64>(mut a: f64, mut b: f64, mut fa: f64, mut f: F, tol: f64) -> f64 {
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if (b - a) <= tol || m <= a || m >= b {
            return m;
        }
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if (fm < 0.0) == (fa < 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_polynomial_exactness() {
        let g = GaussLegendre::new(8);
        let wsum: f64 = g.mapped(-1.0, 1.0).map(|(_, w)| w).sum();
        assert!((wsum - 2.0).abs() < 1e-14);
        // ∫_0^2 x^15 dx = 2^16/16
        let v = g.integrate(0.0, 2.0, |x| x.powi(15));
        assert!((v - 4096.0).abs() < 1e-9);
    }

    #[test]
    fn tanh_sinh_endpoint_singularities() {
        // ∫_0^1 x^{-1/2} = 2, ∫_0^1 ln x = -1, ∫_{-1}^1 (1-x²)^{-1/2} = π
        let r = tanh_sinh(0.0, 1.0, 1e-12, 10, |x| x.powf(-0.5));
        assert!((r.value - 2.0).abs() < 1e-10, "{r:?}");
        let r = tanh_sinh(0.0, 1.0, 1e-12, 10, f64::ln);
        assert!((r.value + 1.0).abs() < 1e-10);
        let r = tanh_sinh_offsets(-1.0, 1.0, 1e-12, 10, |_, l, r| 1.0 / (l * r).sqrt());
        assert!((r.value - PI).abs() < 1e-12, "{r:?}");
        let r = tanh_sinh(-1.0, 1.0, 1e-12, 10, |x| 1.0 / ((1.0 - x) * (1.0 + x)).sqrt());
        assert!((r.value - PI).abs() < 1e-7, "{r:?}");
    }

    #[test]
    fn pairwise_matches_naive_on_small_input() {
        let v: Vec<f64> = (1..=100).map(|i| i as f64).collect();
        assert_eq!(pairwise_sum(&v), 5050.0);
    }

    #[test]
    fn bisection_finds_cos_root() {
        let r = bisect_root(1.0, 2.0, 1f64.cos(), f64::cos, 1e-14);
        assert!((r - PI / 2.0).abs() < 1e-13);
    }
}
