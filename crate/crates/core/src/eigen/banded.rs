use super::{InertiaCount, InertiaMethod};
use crate::error::{Error, Result};
use crate::model::BandedSymmetricMatrix;

/// Number of eigenvalues ≤ μ from the inertia of an LDLᵀ factorization of
/// M − μI computed inside the band (no pivoting).
///
/// A pivot below ulp·‖M‖ moves the shift up by 64·ulp·‖M‖ and retries; a
/// second breakdown is reported as an error.
pub fn banded_inertia(m: &BandedSymmetricMatrix, mu: f64) -> Result<InertiaCount> {
    m.check_finite()?;
    let norm = m.norm_inf().max(f64::MIN_POSITIVE);
    let threshold = f64::EPSILON * norm;
    let nudge = 64.0 * f64::EPSILON * norm;
    match negative_pivots(m, mu, threshold) {
        Some(count) => Ok(InertiaCount {
            shift: mu,
            count,
            method: InertiaMethod::BandedLdl,
            nudged: false,
        }),
        None => match negative_pivots(m, mu + nudge, threshold) {
            Some(count) => Ok(InertiaCount {
                shift: mu,
                count,
                method: InertiaMethod::BandedLdl,
                nudged: true,
            }),
            None => Err(Error::Numerical(format!(
                "banded LDLᵀ pivot breakdown at shift {mu} and at the nudged shift"
            ))),
        },
    }
}

/// Count of negative pivots, or `None` on breakdown.
fn negative_pivots(m: &BandedSymmetricMatrix, mu: f64, threshold: f64) -> Option<usize> {
    let n = m.order();
    let b = m.bandwidth();
    let w = b + 1;
    // Row i of L occupies l[i*w .. (i+1)*w], slot s ↔ column i - b + s.
    let mut l = vec![0.0; n * w];
    let mut d = vec![0.0; n];
    // t_k = L_ik·D_k for the row being factorized.
    let mut t = vec![0.0; w];
    let mut negatives = 0;
    for i in 0..n {
        let a_row = m.lower_row(i);
        let first = i.saturating_sub(b);
        t.fill(0.0);
        for j in first..i {
            // t_j = A_ij − Σ_{k<j} t_k L_jk over the overlap of both bands.
            let k0 = first.max(j.saturating_sub(b));
            let mut acc = a_row[j + b - i];
            let ti = &t[k0 + b - i..j + b - i];
            let lj = &l[j * w + (k0 + b - j)..j * w + b];
            for (x, y) in ti.iter().zip(lj) {
                acc -= x * y;
            }
            t[j + b - i] = acc;
            l[i * w + j + b - i] = acc / d[j];
        }
        let mut di = a_row[b] - mu;
        for s in (first + b - i)..b {
            di -= t[s] * l[i * w + s];
        }
        if !(di.abs() >= threshold) {
            return None;
        }
        d[i] = di;
        if di < 0.0 {
            negatives += 1;
        }
    }
    Some(negatives)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigen::{sturm_count, tridiagonalize};
    use crate::model::{assemble_hamiltonian, Cube, DisorderLaw, PotentialProfile, SiteField};
    use rand::{Rng, SeedableRng};

    #[test]
    fn identity() {
        let dense: Vec<f64> = (0..25).map(|k| if k % 6 == 0 { 1.0 } else { 0.0 }).collect();
        let m = BandedSymmetricMatrix::from_dense(5, &dense, 0).unwrap();
        assert_eq!(banded_inertia(&m, 0.5).unwrap().count, 0);
        assert_eq!(banded_inertia(&m, 1.5).unwrap().count, 5);
    }

    #[test]
    fn chain_agrees_with_sturm() {
        let cube = Cube::new(1, 1).unwrap();
        let m = assemble_hamiltonian(&cube, None, None).unwrap();
        let t = tridiagonalize(&m).unwrap();
        assert_eq!(banded_inertia(&m, 0.1).unwrap().count, 2);
        assert_eq!(sturm_count(&t, 0.1).count, 2);
    }

    #[test]
    fn exact_eigenvalue_shift_counts_as_le() {
        // Eigenvalue 0 of the 3-chain: the middle pivot vanishes.
        let cube = Cube::new(1, 1).unwrap();
        let m = assemble_hamiltonian(&cube, None, None).unwrap();
        let r = banded_inertia(&m, 0.0).unwrap();
        assert_eq!(r.count, 2);
    }

    #[test]
    fn anderson_d3_random_shifts_match_sturm() {
        let cube = Cube::new(3, 3).unwrap();
        let law = DisorderLaw::UniformSym { half_width: 1.0 };
        let f = SiteField::sample(cube, &PotentialProfile::Constant { eta: 1.0 }, &law, 42);
        let m = assemble_hamiltonian(&cube, Some(&f), None).unwrap();
        let t = tridiagonalize(&m).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let mu = rng.random::<f64>() * 16.0 - 8.0;
            assert_eq!(
                banded_inertia(&m, mu).unwrap().count,
                sturm_count(&t, mu).count,
                "shift {mu}"
            );
        }
    }
}
