use std::f64::consts::PI;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::fourier::{fourier_weighted_norm, FourierOptions, WeightedFourierNorm};
use crate::error::{Error, Result};

/// Shape of a compactly supported test function. Every shape peaks at 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Shape {
    /// exp(1 − 1/(1 − u²)), u = (x − center)/half_width. C^∞.
    Bump { center: f64, half_width: f64 },
    /// (½(1 + cos(πx/K)))² on [−K, K]. C³.
    RaisedCosine2 { half_width: f64 },
    /// 1 on [−K, K], septic smoothstep ramp down to 0 over `ramp`. C³.
    Plateau { half_width: f64, ramp: f64 },
}

/// amplitude · shape, with a lazily computed Fourier-weighted norm.
#[derive(Debug)]
pub struct TestFunction {
    shape: Shape,
    amplitude: f64,
    norm: OnceLock<WeightedFourierNorm>,
}

impl Clone for TestFunction {
    fn clone(&self) -> Self {
        let norm = OnceLock::new();
        if let Some(n) = self.norm.get() {
            let _ = norm.set(*n);
        }
        TestFunction {
            shape: self.shape,
            amplitude: self.amplitude,
            norm,
        }
    }
}

impl PartialEq for TestFunction {
    fn eq(&self, other: &Self) -> bool {
        self.shape == other.shape && self.amplitude == other.amplitude
    }
}

// Septic smoothstep S(s) = 35s⁴ − 84s⁵ + 70s⁶ − 20s⁷, coefficients by power.
const SMOOTHSTEP: [f64; 8] = [0.0, 0.0, 0.0, 0.0, 35.0, -84.0, 70.0, -20.0];

fn poly_derivatives(coeffs: &[f64], s: f64, order: usize) -> Vec<f64> {
    let mut c = coeffs.to_vec();
    let mut out = Vec::with_capacity(order + 1);
    for _ in 0..=order {
        out.push(c.iter().rev().fold(0.0, |acc, &a| acc * s + a));
        c = c.iter().enumerate().skip(1).map(|(i, &a)| i as f64 * a).collect();
        if c.is_empty() {
            c.push(0.0);
        }
    }
    out
}

impl TestFunction {
    pub fn new(shape: Shape) -> Result<Self> {
        let ok = |v: f64| v > 0.0 && v.is_finite();
        let valid = match shape {
            Shape::Bump { center, half_width } => center.is_finite() && ok(half_width),
            Shape::RaisedCosine2 { half_width } => ok(half_width),
            Shape::Plateau { half_width, ramp } => ok(half_width) && ok(ramp),
        };
        if !valid {
            return Err(Error::Config(format!("invalid test function {shape:?}")));
        }
        Ok(TestFunction {
            shape,
            amplitude: 1.0,
            norm: OnceLock::new(),
        })
    }

    /// The same shape scaled to peak at `amplitude` (≥ 0; 0 gives f ≡ 0).
    pub fn with_amplitude(&self, amplitude: f64) -> Result<Self> {
        if !(amplitude >= 0.0 && amplitude.is_finite()) {
            return Err(Error::Config(format!(
                "test function amplitude must be finite and ≥ 0, got {amplitude}"
            )));
        }
        Ok(TestFunction {
            shape: self.shape,
            amplitude,
            norm: OnceLock::new(),
        })
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    pub fn bump(center: f64, half_width: f64) -> Result<Self> {
        Self::new(Shape::Bump { center, half_width })
    }

    pub fn raised_cosine2(half_width: f64) -> Result<Self> {
        Self::new(Shape::RaisedCosine2 { half_width })
    }

    pub fn plateau(half_width: f64, ramp: f64) -> Result<Self> {
        Self::new(Shape::Plateau { half_width, ramp })
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    /// Symmetry center.
    pub fn center(&self) -> f64 {
        match self.shape {
            Shape::Bump { center, .. } => center,
            _ => 0.0,
        }
    }

    /// Distance from the center to the edge of the support.
    pub fn reach(&self) -> f64 {
        match self.shape {
            Shape::Bump { half_width, .. } | Shape::RaisedCosine2 { half_width } => half_width,
            Shape::Plateau { half_width, ramp } => half_width + ramp,
        }
    }

    /// Closed support [lo, hi].
    pub fn support(&self) -> (f64, f64) {
        let c = self.center();
        let r = self.reach();
        (c - r, c + r)
    }

    /// Largest integer order k for which f^{(k−1)} is absolutely continuous
    /// with f^{(k)} integrable, i.e. usable for k-fold integration by parts.
    pub fn smoothness(&self) -> usize {
        match self.shape {
            Shape::Bump { .. } => 14,
            _ => 4,
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.derivatives(x, 0)[0]
    }

    pub fn derivative(&self, x: f64) -> f64 {
        self.derivatives(x, 1)[1]
    }

    /// f(x), f′(x), …, f^{(order)}(x). Outside the open support all are 0.
    /// At jump points of the top derivative the value from the inner side is
    /// returned.
    pub fn derivatives(&self, x: f64, order: usize) -> Vec<f64> {
        let mut out = self.unit_derivatives(x, order);
        if self.amplitude != 1.0 {
            out.iter_mut().for_each(|v| *v *= self.amplitude);
        }
        out
    }

    fn unit_derivatives(&self, x: f64, order: usize) -> Vec<f64> {
        let mut out = vec![0.0; order + 1];
        match self.shape {
            Shape::Bump { center, half_width } => {
                let u = (x - center) / half_width;
                if u.abs() >= 1.0 {
                    return out;
                }
                let h0 = 1.0 - 1.0 / ((1.0 - u) * (1.0 + u));
                let e0 = h0.exp();
                if e0 == 0.0 {
                    return out;
                }
                // Taylor coefficients of h and e^h about u.
                let (p, m) = (1.0 / (1.0 - u), 1.0 / (1.0 + u));
                let mut h = vec![0.0; order + 1];
                let (mut pj, mut mj) = (p, m);
                for hj in h.iter_mut().skip(1) {
                    pj *= p;
                    mj *= -m;
                    *hj = -0.5 * (pj + mj);
                }
                let mut e = vec![0.0; order + 1];
                e[0] = e0;
                for n in 1..=order {
                    let mut acc = 0.0;
                    for j in 1..=n {
                        acc += j as f64 * h[j] * e[n - j];
                    }
                    e[n] = acc / n as f64;
                }
                let mut fact = 1.0;
                let mut scale = 1.0;
                for n in 0..=order {
                    if n > 0 {
                        fact *= n as f64;
                        scale /= half_width;
                    }
                    out[n] = e[n] * fact * scale;
                }
            }
            Shape::RaisedCosine2 { half_width } => {
                if x.abs() > half_width {
                    return out;
                }
                // cos⁴(ax) = (3 + 4 cos 2ax + cos 4ax)/8 with a = π/(2K).
                let a = PI / (2.0 * half_width);
                for (n, slot) in out.iter_mut().enumerate() {
                    let phase = n as f64 * PI / 2.0;
                    let b2 = (2.0 * a).powi(n as i32);
                    let b4 = (4.0 * a).powi(n as i32);
                    let c = if n == 0 { 3.0 } else { 0.0 };
                    *slot = (c + 4.0 * b2 * (2.0 * a * x + phase).cos() + b4 * (4.0 * a * x + phase).cos()) / 8.0;
                }
            }
            Shape::Plateau { half_width, ramp } => {
                let r = x.abs();
                if r <= half_width {
                    out[0] = 1.0;
                } else if r < half_width + ramp {
                    let s = (half_width + ramp - r) / ramp;
                    let ds = -x.signum() / ramp;
                    let p = poly_derivatives(&SMOOTHSTEP, s, order);
                    let mut scale = 1.0;
                    for n in 0..=order {
                        out[n] = p[n] * scale;
                        scale *= ds;
                    }
                }
            }
        }
        out
    }

    /// sup |f′|, by dense sampling with a small safety factor.
    pub fn derivative_sup(&self) -> f64 {
        match self.shape {
            // S′ peaks at s = 1/2 with value 35/16.
            Shape::Plateau { ramp, .. } => self.amplitude * 35.0 / 16.0 / ramp,
            _ => {
                let (lo, hi) = self.support();
                let n = 20_000;
                let h = (hi - lo) / n as f64;
                let sup = (0..=n)
                    .map(|i| self.derivative(lo + i as f64 * h).abs())
                    .fold(0.0, f64::max);
                sup * 1.001
            }
        }
    }

    /// ‖(i+ξ)f̂‖₁ with default quadrature options, computed once.
    pub fn fourier_norm(&self) -> Result<WeightedFourierNorm> {
        if let Some(n) = self.norm.get() {
            return Ok(*n);
        }
        let n = fourier_weighted_norm(self, &FourierOptions::default())?;
        let _ = self.norm.set(n);
        Ok(n)
    }
}
