use super::{InertiaCount, InertiaMethod, Tridiagonal};

/// Number of eigenvalues ≤ μ from the Sturm sequence.
///
/// Pivots with |q| ≤ pivmin are replaced by −pivmin, which realizes the
/// "≤ μ" convention at exact eigenvalues.
pub fn count_le(t: &Tridiagonal, mu: f64) -> usize {
    let n = t.order();
    if n == 0 {
        return 0;
    }
    let max_e2 = t.off.iter().map(|e| e * e).fold(1.0, f64::max);
    let pivmin = f64::MIN_POSITIVE * max_e2;
    let mut count = 0;
    let mut q = t.diag[0] - mu;
    if q.abs() <= pivmin {
        q = -pivmin;
    }
    if q < 0.0 {
        count += 1;
    }
    for i in 1..n {
        let e = t.off[i - 1];
        q = (t.diag[i] - mu) - e * e / q;
        if q.abs() <= pivmin {
            q = -pivmin;
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

pub fn sturm_count(t: &Tridiagonal, mu: f64) -> InertiaCount {
    InertiaCount {
        shift: mu,
        count: count_le(t, mu),
        method: InertiaMethod::Sturm,
        nudged: false,
    }
}

/// Eigenvalues found in a window, with multiplicity, ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowEigenvalues {
    pub values: Vec<f64>,
    /// Requested tolerance was below attainable precision and was raised.
    pub clamped: bool,
    /// Bisection stopping width actually used.
    pub resolution: f64,
}

/// Eigenvalues in [a, b] by Sturm bisection.
///
/// Intervals are split until their width drops to max(tol, 4·ulp·‖T‖);
/// each surviving interval contributes its midpoint with the multiplicity
/// given by the count difference.
pub fn eigs_in_window(t: &Tridiagonal, a: f64, b: f64, tol: f64) -> WindowEigenvalues {
    let floor = 4.0 * f64::EPSILON * t.norm_bound().max(f64::MIN_POSITIVE);
    let resolution = tol.max(floor);
    let clamped = tol < floor;
    let mut values = Vec::new();
    if t.order() == 0 || !(a <= b) {
        return WindowEigenvalues {
            values,
            clamped,
            resolution,
        };
    }
    let lo = a.next_down();
    let c_lo = count_le(t, lo);
    let c_hi = count_le(t, b);
    let mut stack = vec![(lo, b, c_lo, c_hi)];
    while let Some((l, h, cl, ch)) = stack.pop() {
        if ch == cl {
            continue;
        }
        let mid = 0.5 * (l + h);
        if h - l <= resolution || mid <= l || mid >= h {
            values.extend(std::iter::repeat_n(mid, ch - cl));
            continue;
        }
        let cm = count_le(t, mid);
        // Upper half first so the lower half is processed next.
        stack.push((mid, h, cm, ch));
        stack.push((l, mid, cl, cm));
    }
    values.sort_by(f64::total_cmp);
    WindowEigenvalues {
        values,
        clamped,
        resolution,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigen::{full_spectrum, tridiagonalize};
    use crate::model::BandedSymmetricMatrix;
    use rand::{Rng, SeedableRng};
    use std::f64::consts::SQRT_2;

    fn chain3() -> Tridiagonal {
        Tridiagonal::new(vec![0.0; 3], vec![1.0; 2])
    }

    #[test]
    fn chain_counts() {
        let t = chain3();
        assert_eq!(sturm_count(&t, -1.0).count, 1);
        assert_eq!(sturm_count(&t, 0.1).count, 2);
        assert_eq!(sturm_count(&t, 0.0).count, 2);
        assert_eq!(sturm_count(&t, 5.0).count, 3);
        let id = Tridiagonal::new(vec![1.0; 4], vec![0.0; 3]);
        assert_eq!(sturm_count(&id, 0.5).count, 0);
        assert_eq!(sturm_count(&id, 1.0).count, 4);
    }

    #[test]
    fn chain_window() {
        let w = eigs_in_window(&chain3(), -0.1, 2.0, 1e-12);
        assert_eq!(w.values.len(), 2);
        assert!(w.values[0].abs() < 1e-12);
        assert!((w.values[1] - SQRT_2).abs() < 1e-12);
        assert!(!w.clamped);
    }

    #[test]
    fn empty_window_and_clamp() {
        let w = eigs_in_window(&chain3(), 0.5, 1.0, 1e-30);
        assert!(w.values.is_empty());
        assert!(w.clamped);
    }

    #[test]
    fn repeated_eigenvalues_keep_multiplicity() {
        let t = Tridiagonal::new(vec![2.0, 2.0, 2.0, -1.0], vec![0.0; 3]);
        let w = eigs_in_window(&t, 0.0, 3.0, 1e-13);
        assert_eq!(w.values.len(), 3);
        assert!(w.values.iter().all(|v| (v - 2.0).abs() < 1e-12));
    }

    #[test]
    fn random_dense_full_window_matches_ql() {
        let n = 50;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let mut dense = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..=i {
                let x: f64 = rng.random::<f64>() - 0.5;
                dense[i * n + j] = x;
                dense[j * n + i] = x;
            }
        }
        let m = BandedSymmetricMatrix::from_dense(n, &dense, n - 1).unwrap();
        let t = tridiagonalize(&m).unwrap();
        let full = full_spectrum(&t).unwrap();
        let (lo, hi) = t.gershgorin();
        let w = eigs_in_window(&t, lo, hi, 1e-13);
        assert_eq!(w.values.len(), n);
        for (a, b) in w.values.iter().zip(&full) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn count_is_monotone() {
        let t = Tridiagonal::new((0..40).map(|i| ((i * 7) % 5) as f64 - 2.0).collect(), vec![0.7; 39]);
        let mut prev = 0;
        for k in 0..400 {
            let mu = -5.0 + k as f64 * 0.025;
            let c = count_le(&t, mu);
            assert!(c >= prev);
            prev = c;
        }
        assert_eq!(prev, 40);
    }
}
