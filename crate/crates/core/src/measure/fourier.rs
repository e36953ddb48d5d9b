use std::f64::consts::PI;

use serde::Serialize;

use super::test_fn::{Shape, TestFunction};
use crate::error::{Error, Result};
use crate::quad::{bisect_root, GaussLegendre};

/// ∫ √(1+ξ²) |f̂(ξ)| dξ with f̂(ξ) = (1/2π) ∫ f(x) e^{−ixξ} dx.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeightedFourierNorm {
    pub value: f64,
    /// Tail bound plus the quadrature error estimate.
    pub error: f64,
    /// Rigorous bound on the contribution from |ξ| > cutoff.
    pub tail: f64,
    pub cutoff: f64,
    /// Integration-by-parts order used for the tail bound.
    pub tail_order: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourierOptions {
    /// Target for error / value.
    pub rel_tol: f64,
    /// Largest admissible frequency cutoff.
    pub xi_cap: f64,
    /// Multiplier on every panel count (self-convergence checks use 2).
    pub refine: usize,
}

impl Default for FourierOptions {
    fn default() -> Self {
        FourierOptions {
            rel_tol: 1e-6,
            xi_cap: 1e6,
            refine: 1,
        }
    }
}

/// Cosine transform of the right half of an even function,
/// F(ξ) = (1/π) ∫_0^R g(t) cos(tξ) dt with g(t) = f(center + t), so that
/// |f̂(ξ)| = |F(ξ)|.
enum HalfTransform {
    /// Fixed quadrature nodes (t, w·g(t)/π); O(nodes) per evaluation.
    Tabulated(Vec<(f64, f64)>),
    /// cos⁴ expanded into three cosines.
    RaisedCosine { amplitude: f64, half_width: f64 },
    /// Flat part as a sinc; polynomial ramp integrated exactly.
    Plateau { amplitude: f64, half_width: f64, ramp: f64 },
}

impl HalfTransform {
    fn new(f: &TestFunction, xi_max: f64, refine: usize) -> Self {
        let amplitude = f.amplitude();
        match f.shape() {
            Shape::RaisedCosine2 { half_width } => HalfTransform::RaisedCosine { amplitude, half_width },
            Shape::Plateau { half_width, ramp } => HalfTransform::Plateau {
                amplitude,
                half_width,
                ramp,
            },
            Shape::Bump { .. } => Self::tabulated(f, xi_max, refine),
        }
    }

    fn tabulated(f: &TestFunction, xi_max: f64, refine: usize) -> Self {
        let gl = GaussLegendre::new(16);
        let c = f.center();
        let r = f.reach();
        let panels = refine * (8 + (xi_max * r / PI).ceil() as usize);
        let h = r / panels as f64;
        let mut nodes = Vec::with_capacity(panels * 16);
        for p in 0..panels {
            let a = p as f64 * h;
            for (t, w) in gl.mapped(a, a + h) {
                let g = f.eval(c + t);
                if g != 0.0 {
                    nodes.push((t, w * g / PI));
                }
            }
        }
        HalfTransform::Tabulated(nodes)
    }

    fn eval(&self, xi: f64) -> f64 {
        match *self {
            HalfTransform::Tabulated(ref nodes) => nodes.iter().map(|&(t, w)| w * (t * xi).cos()).sum(),
            HalfTransform::RaisedCosine {
                amplitude,
                half_width: k,
            } => {
                let a = PI / (2.0 * k);
                // ∫_0^K cos(bt) cos(ξt) dt
                let cc = |b: f64| 0.5 * (sinc_integral(b - xi, k) + sinc_integral(b + xi, k));
                amplitude * (3.0 * cc(0.0) + 4.0 * cc(2.0 * a) + cc(4.0 * a)) / (8.0 * PI)
            }
            HalfTransform::Plateau {
                amplitude,
                half_width: k,
                ramp,
            } => {
                // t = K + δ − δs maps the ramp to S(s), s ∈ [0, 1].
                let phase = (k + ramp) * xi;
                // ∫ S e^{−iωs} is the conjugate of the tabulated ∫ S e^{iωs}.
                let (re, im) = smoothstep_fourier(ramp * xi);
                let ramp_part = ramp * (phase.cos() * re + phase.sin() * im);
                amplitude * (sinc_integral(xi, k) + ramp_part) / PI
            }
        }
    }
}

/// ∫_0^K cos(wt) dt.
fn sinc_integral(w: f64, k: f64) -> f64 {
    if w == 0.0 {
        k
    } else {
        (w * k).sin() / w
    }
}

/// ∫_0^1 S(s) e^{iωs} ds for the septic smoothstep S, as (re, im).
fn smoothstep_fourier(omega: f64) -> (f64, f64) {
    const S: [f64; 8] = [0.0, 0.0, 0.0, 0.0, 35.0, -84.0, 70.0, -20.0];
    if omega.abs() < 8.0 {
        let gl = GaussLegendre::new(24);
        let poly = |s: f64| S.iter().rev().fold(0.0, |acc, &c| acc * s + c);
        let re = gl.integrate(0.0, 1.0, |s| poly(s) * (omega * s).cos());
        let im = gl.integrate(0.0, 1.0, |s| poly(s) * (omega * s).sin());
        return (re, im);
    }
    // ∫ p e^{iωs} = e^{iωs} Σ_j (−1)^j p^{(j)}(s) / (iω)^{j+1}, taken between
    // s = 0 and s = 1; at s = 0 only derivatives of order ≥ 4 survive.
    let mut coeffs = S.to_vec();
    let (mut re, mut im) = (0.0, 0.0);
    let (c1, s1) = (omega.cos(), omega.sin());
    // 1/(iω)^{j+1} = (−i/ω)^{j+1}; track it as a complex number.
    let (mut pr, mut pi) = (0.0, -1.0 / omega);
    for j in 0..8 {
        let at1: f64 = coeffs.iter().sum();
        let at0 = coeffs[0];
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        // sign · (p(1) e^{iω} − p(0)) · (pr + i pi)
        let (ar, ai) = (sign * (at1 * c1 - at0), sign * at1 * s1);
        re += ar * pr - ai * pi;
        im += ar * pi + ai * pr;
        coeffs = coeffs.iter().enumerate().skip(1).map(|(i, &c)| i as f64 * c).collect();
        // multiply by −i/ω
        let (nr, ni) = (pi / omega, -pr / omega);
        pr = nr;
        pi = ni;
    }
    (re, im)
}

/// ‖f^{(k)}‖₁ for k = 0..=max, inflated slightly to serve as bounds.
fn derivative_l1_norms(f: &TestFunction, max: usize) -> Vec<f64> {
    let gl = GaussLegendre::new(8);
    let c = f.center();
    let r = f.reach();
    let start = match f.shape() {
        Shape::Plateau { half_width, .. } => half_width,
        _ => 0.0,
    };
    let panels = 2000;
    let h = (r - start) / panels as f64;
    let mut sums = vec![0.0; max + 1];
    for p in 0..panels {
        let a = start + p as f64 * h;
        for (t, w) in gl.mapped(a, a + h) {
            let d = f.derivatives(c + t, max);
            for (s, v) in sums.iter_mut().zip(&d) {
                *s += w * v.abs();
            }
        }
    }
    // Both halves; the flat part of a plateau contributes only to k = 0.
    sums.iter().map(|s| 2.0 * 1.02 * s).collect()
}

/// Tail bound for the weight √(α² + β²ξ²) beyond Ξ, from
/// |f̂(ξ)| ≤ ‖f^{(k)}‖₁ / (2π|ξ|^k) and √(α²+β²ξ²) ≤ βξ + α²/(2βξ).
fn tail_bound(dk: f64, k: usize, alpha: f64, beta: f64, xi: f64) -> f64 {
    let k = k as f64;
    dk / PI * (beta * xi.powf(2.0 - k) / (k - 2.0) + alpha * alpha / (2.0 * beta) * xi.powf(-k) / k)
}

/// ‖(i+ξ)f̂‖₁ = ∫ √(1+ξ²) |f̂(ξ)| dξ.
pub fn fourier_weighted_norm(f: &TestFunction, opts: &FourierOptions) -> Result<WeightedFourierNorm> {
    fourier_weighted_l1(f, 1.0, 1.0, opts)
}

/// ∫ √(α² + β²ξ²) |f̂(ξ)| dξ for α ≥ 0, β > 0.
///
/// The frequency cutoff Ξ is the smallest one at which some
/// integration-by-parts tail bound falls below half the error budget; the
/// budget is measured against the lower bound α·max f ≤ α‖f̂‖₁. Below Ξ the
/// even integrand is integrated on panels split at the zeros of f̂.
pub fn fourier_weighted_l1(
    f: &TestFunction,
    alpha: f64,
    beta: f64,
    opts: &FourierOptions,
) -> Result<WeightedFourierNorm> {
    if !(alpha >= 0.0 && beta > 0.0) {
        return Err(Error::Domain(format!(
            "weight √(α²+β²ξ²) needs α ≥ 0, β > 0; got {alpha}, {beta}"
        )));
    }
    if f.amplitude() == 0.0 {
        return Ok(WeightedFourierNorm {
            value: 0.0,
            error: 0.0,
            tail: 0.0,
            cutoff: 0.0,
            tail_order: 0,
        });
    }
    let kmax = f.smoothness();
    let norms = derivative_l1_norms(f, kmax);
    // α = 0 has no useful lower bound; fall back to an absolute budget.
    let lower = if alpha > 0.0 {
        alpha * f.amplitude()
    } else {
        f.amplitude() * 1e-3
    };
    let budget = 0.5 * opts.rel_tol * lower;
    let r = f.reach();
    let mut best: Option<(f64, usize, f64)> = None;
    for (k, &norm) in norms.iter().enumerate().take(kmax + 1).skip(3) {
        let tail = |xi: f64| tail_bound(norm, k, alpha, beta, xi);
        if tail(opts.xi_cap) > budget {
            continue;
        }
        // Bisection in log ξ.
        let (mut lo, mut hi) = ((PI / r).ln(), opts.xi_cap.ln());
        if tail(lo.exp()) <= budget {
            hi = lo;
        }
        for _ in 0..100 {
            if hi - lo < 1e-6 {
                break;
            }
            let mid = 0.5 * (lo + hi);
            if tail(mid.exp()) <= budget {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let xi = hi.exp();
        if best.is_none_or(|b| xi < b.0) {
            best = Some((xi, k, tail(xi)));
        }
    }
    let Some((cutoff, tail_order, tail)) = best else {
        return Err(Error::Numerical(format!(
            "Fourier tail of {:?} cannot meet relative tolerance {} below ξ = {}",
            f.shape(),
            opts.rel_tol,
            opts.xi_cap
        )));
    };

    let mut refine = opts.refine.max(1);
    for _ in 0..4 {
        let (body, quad_err) = weighted_body(f, alpha, beta, cutoff, refine);
        if quad_err <= 0.5 * opts.rel_tol * body {
            return Ok(WeightedFourierNorm {
                value: body,
                error: tail + quad_err,
                tail,
                cutoff,
                tail_order,
            });
        }
        refine *= 2;
    }
    Err(Error::Numerical(format!(
        "Fourier norm quadrature of {:?} did not reach relative tolerance {}",
        f.shape(),
        opts.rel_tol
    )))
}

/// 2 ∫_0^Ξ √(α²+β²ξ²) |F(ξ)| dξ and a GL16-vs-GL8 error estimate.
fn weighted_body(f: &TestFunction, alpha: f64, beta: f64, cutoff: f64, refine: usize) -> (f64, f64) {
    let transform = HalfTransform::new(f, cutoff, refine);
    let fine = GaussLegendre::new(16);
    let coarse = GaussLegendre::new(8);
    let weight = |xi: f64| (alpha * alpha + beta * beta * xi * xi).sqrt();
    let width = PI / (4.0 * f.reach() * refine as f64);
    let panels = (cutoff / width).ceil() as usize;
    let width = cutoff / panels as f64;
    let mut total = 0.0;
    let mut err = 0.0;
    let mut piece = |a: f64, b: f64| {
        let g = |xi: f64| weight(xi) * transform.eval(xi).abs();
        let hi = fine.integrate(a, b, g);
        let lo = coarse.integrate(a, b, g);
        total += hi;
        err += (hi - lo).abs();
    };
    let mut fa = transform.eval(0.0);
    for p in 0..panels {
        let a = p as f64 * width;
        let b = if p + 1 == panels { cutoff } else { a + width };
        let fb = transform.eval(b);
        if fa * fb < 0.0 {
            let root = bisect_root(a, b, fa, |x| transform.eval(x), 1e-14 * b.max(1.0));
            piece(a, root);
            piece(root, b);
        } else {
            piece(a, b);
        }
        fa = fb;
    }
    (2.0 * total, 2.0 * err)
}
