use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Deterministic envelope a_n multiplying the raw disorder.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PotentialProfile {
    /// a_n = C (1 + |n|)^{-2-ε} with the Euclidean norm |n|.
    Decaying { amplitude: f64, epsilon: f64 },
    /// a_n = η for every site.
    Constant { eta: f64 },
}

impl PotentialProfile {
    pub fn validate(&self) -> Result<()> {
        match *self {
            PotentialProfile::Decaying { amplitude, epsilon } => {
                if !(amplitude >= 0.0 && amplitude.is_finite()) {
                    return Err(Error::Config(format!(
                        "decaying amplitude must be finite and ≥ 0, got {amplitude}"
                    )));
                }
                if !(epsilon > 0.0 && epsilon.is_finite()) {
                    return Err(Error::Config(format!(
                        "decay epsilon must be finite and > 0, got {epsilon}"
                    )));
                }
            }
            PotentialProfile::Constant { eta } => {
                if !(eta >= 0.0 && eta.is_finite()) {
                    return Err(Error::Config(format!("coupling eta must be finite and ≥ 0, got {eta}")));
                }
            }
        }
        Ok(())
    }

    pub fn envelope(&self, site: &[i64]) -> f64 {
        match *self {
            PotentialProfile::Decaying { amplitude, epsilon } => {
                let norm = site.iter().map(|&n| (n as f64) * (n as f64)).sum::<f64>().sqrt();
                amplitude * (1.0 + norm).powf(-2.0 - epsilon)
            }
            PotentialProfile::Constant { eta } => eta,
        }
    }

    pub fn is_zero(&self) -> bool {
        match *self {
            PotentialProfile::Decaying { amplitude, .. } => amplitude == 0.0,
            PotentialProfile::Constant { eta } => eta == 0.0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_envelope() {
        let p = PotentialProfile::Constant { eta: 0.1 };
        assert_eq!(p.envelope(&[5, 5, 5]), 0.1);
    }

    #[test]
    fn decaying_envelope_values() {
        let p = PotentialProfile::Decaying {
            amplitude: 1.0,
            epsilon: 0.5,
        };
        assert_eq!(p.envelope(&[0]), 1.0);
        // |(3,4)| = 5, so (1+5)^{-2.5}
        let direct = 1.0 / (6.0f64 * 6.0 * 6.0f64.sqrt());
        assert!((p.envelope(&[3, 4]) - direct).abs() < 1e-15);
        assert!((p.envelope(&[3, 4]) - 0.0113402).abs() < 1e-7);
    }

    #[test]
    fn decaying_envelope_bound_is_amplitude() {
        let p = PotentialProfile::Decaying {
            amplitude: 2.5,
            epsilon: 0.3,
        };
        let cube = crate::model::Cube::new(3, 4).unwrap();
        let mut max = 0.0f64;
        cube.for_each_site(|_, s| {
            let r = s.iter().map(|&n| (n * n) as f64).sum::<f64>().sqrt();
            let a = p.envelope(s);
            assert!(a > 0.0);
            max = max.max(a * (1.0 + r).powf(2.3));
        });
        assert!((max - 2.5).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(PotentialProfile::Constant { eta: -1.0 }.validate().is_err());
        assert!(PotentialProfile::Decaying {
            amplitude: 1.0,
            epsilon: 0.0
        }
        .validate()
        .is_err());
    }
}
