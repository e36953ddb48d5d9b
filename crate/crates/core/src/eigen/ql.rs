use super::Tridiagonal;
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 30;

/// All eigenvalues, ascending, by implicit QL with Wilkinson shifts.
///
/// An off-diagonal entry is dropped once it is negligible relative to its
/// neighbours on the diagonal or, failing that, below ε‖T‖. The absolute
/// floor matters when eigenvalues cluster at 0: with a near-zero diagonal
/// the relative test alone never fires.
pub fn full_spectrum(t: &Tridiagonal) -> Result<Vec<f64>> {
    let n = t.order();
    let floor = f64::EPSILON * t.norm_bound();
    let mut d = t.diag.clone();
    let mut e = t.off.clone();
    e.push(0.0);
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd || e[m].abs() <= floor {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_SWEEPS {
                return Err(Error::NoConvergence { index: l });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    d.sort_by(f64::total_cmp);
    Ok(d)
}
