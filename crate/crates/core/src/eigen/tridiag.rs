use crate::error::Result;
use crate::model::BandedSymmetricMatrix;

/// Symmetric tridiagonal matrix: `diag[0..n]`, `off[0..n-1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tridiagonal {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl Tridiagonal {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Self {
        assert_eq!(off.len() + 1, diag.len().max(1), "off-diagonal length must be n-1");
        Tridiagonal { diag, off }
    }

    pub fn order(&self) -> usize {
        self.diag.len()
    }

    /// Gershgorin bound on the spectral radius.
    pub fn norm_bound(&self) -> f64 {
        let n = self.diag.len();
        (0..n)
            .map(|i| {
                let left = if i > 0 { self.off[i - 1].abs() } else { 0.0 };
                let right = if i + 1 < n { self.off[i].abs() } else { 0.0 };
                self.diag[i].abs() + left + right
            })
            .fold(0.0, f64::max)
    }

    /// Gershgorin interval containing the spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.diag.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let left = if i > 0 { self.off[i - 1].abs() } else { 0.0 };
            let right = if i + 1 < n { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - left - right);
            hi = hi.max(self.diag[i] + left + right);
        }
        (lo, hi)
    }
}

/// Orthogonal reduction to tridiagonal form by Householder reflections.
///
/// Matrices that are already tridiagonal (bandwidth ≤ 1) are copied.
pub fn tridiagonalize(m: &BandedSymmetricMatrix) -> Result<Tridiagonal> {
    m.check_finite()?;
    let n = m.order();
    if n == 0 {
        return Ok(Tridiagonal {
            diag: vec![],
            off: vec![],
        });
    }
    if m.bandwidth() <= 1 {
        let diag = m.diagonal();
        let off = (1..n).map(|i| m.get(i, i - 1)).collect();
        return Ok(Tridiagonal { diag, off });
    }
    let mut a = m.to_dense();
    Ok(householder_lower(&mut a, n))
}

/// In-place reduction of a dense symmetric row-major matrix; only the lower
/// triangle is read and updated.
fn householder_lower(a: &mut [f64], n: usize) -> Tridiagonal {
    let mut diag = vec![0.0; n];
    let mut off = vec![0.0; n.saturating_sub(1)];
    let mut v = vec![0.0; n];
    let mut p = vec![0.0; n];
    for k in 0..n.saturating_sub(2) {
        diag[k] = a[k * n + k];
        let base = k + 1;
        let m = n - base;
        let alpha = a[base * n + k];
        let mut sigma = 0.0;
        for i in 1..m {
            let x = a[(base + i) * n + k];
            sigma += x * x;
        }
        if sigma == 0.0 {
            off[k] = alpha;
            continue;
        }
        let norm = (alpha * alpha + sigma).sqrt();
        let beta = if alpha >= 0.0 { -norm } else { norm };
        let tau = (beta - alpha) / beta;
        let scale = 1.0 / (alpha - beta);
        let v = &mut v[..m];
        v[0] = 1.0;
        for i in 1..m {
            v[i] = a[(base + i) * n + k] * scale;
        }
        off[k] = beta;

        // p = tau · A22 · v using the lower triangle only.
        let p = &mut p[..m];
        p.fill(0.0);
        for i in 0..m {
            let row = &a[(base + i) * n + base..(base + i) * n + base + i + 1];
            let vi = v[i];
            let mut acc = 0.0;
            for j in 0..i {
                acc += row[j] * v[j];
                p[j] += row[j] * vi;
            }
            p[i] += acc + row[i] * vi;
        }
        let mut pv = 0.0;
        for i in 0..m {
            p[i] *= tau;
            pv += p[i] * v[i];
        }
        // w = p − (tau/2)(pᵀv) v, stored in p.
        let kappa = 0.5 * tau * pv;
        for i in 0..m {
            p[i] -= kappa * v[i];
        }
        // A22 −= v wᵀ + w vᵀ.
        for i in 0..m {
            let row = &mut a[(base + i) * n + base..(base + i) * n + base + i + 1];
            let (vi, wi) = (v[i], p[i]);
            for j in 0..=i {
                row[j] -= vi * p[j] + wi * v[j];
            }
        }
    }
    if n >= 2 {
        diag[n - 2] = a[(n - 2) * n + n - 2];
        off[n - 2] = a[(n - 1) * n + n - 2];
    }
    diag[n - 1] = a[(n - 1) * n + n - 1];
    Tridiagonal { diag, off }
}
