use super::{sample_disorder, Cube, DisorderLaw, PotentialProfile};
use crate::error::{Error, Result};

/// One realized potential configuration v_n = a_n q_n on a cube.
#[derive(Debug, Clone, PartialEq)]
pub struct SiteField {
    cube: Cube,
    raw: Vec<f64>,
    envelope: Vec<f64>,
    potential: Vec<f64>,
    seed: Option<u64>,
}

impl SiteField {
    pub fn sample(cube: Cube, profile: &PotentialProfile, law: &DisorderLaw, master_seed: u64) -> Self {
        let raw = sample_disorder(law, master_seed, &cube);
        let mut field = Self::with_profile(cube, profile, raw);
        field.seed = Some(master_seed);
        field
    }

    /// Combine explicit raw values with an envelope.
    pub fn from_raw(cube: Cube, profile: &PotentialProfile, raw: Vec<f64>) -> Result<Self> {
        if raw.len() != cube.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} raw values for a cube of {} sites",
                raw.len(),
                cube.len()
            )));
        }
        Ok(Self::with_profile(cube, profile, raw))
    }

    /// A field given directly by its potential values (envelope ≡ 1).
    pub fn from_potential(cube: Cube, potential: Vec<f64>) -> Result<Self> {
        if potential.len() != cube.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} potential values for a cube of {} sites",
                potential.len(),
                cube.len()
            )));
        }
        Ok(SiteField {
            cube,
            envelope: vec![1.0; potential.len()],
            raw: potential.clone(),
            potential,
            seed: None,
        })
    }

    pub fn zero(cube: Cube) -> Self {
        SiteField {
            cube,
            raw: vec![0.0; cube.len()],
            envelope: vec![0.0; cube.len()],
            potential: vec![0.0; cube.len()],
            seed: None,
        }
    }

    fn with_profile(cube: Cube, profile: &PotentialProfile, raw: Vec<f64>) -> Self {
        let mut envelope = Vec::with_capacity(cube.len());
        cube.for_each_site(|_, s| envelope.push(profile.envelope(s)));
        let potential = envelope.iter().zip(&raw).map(|(a, q)| a * q).collect();
        SiteField {
            cube,
            raw,
            envelope,
            potential,
            seed: None,
        }
    }

    pub fn cube(&self) -> &Cube {
        &self.cube
    }

    pub fn raw(&self) -> &[f64] {
        &self.raw
    }

    pub fn envelope(&self) -> &[f64] {
        &self.envelope
    }

    pub fn potential(&self) -> &[f64] {
        &self.potential
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn is_zero(&self) -> bool {
        self.potential.iter().all(|&v| v == 0.0)
    }

    /// Σ_n a_n |q_n|, the trace norm of the potential.
    pub fn weighted_abs_sum(&self) -> f64 {
        crate::quad::pairwise_sum_by(self.potential.len(), |i| self.envelope[i] * self.raw[i].abs())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn potential_is_envelope_times_raw() {
        let cube = Cube::new(2, 2).unwrap();
        let profile = PotentialProfile::Decaying {
            amplitude: 1.5,
            epsilon: 0.5,
        };
        let law = DisorderLaw::Gaussian { sigma: 2.0 };
        let f = SiteField::sample(cube, &profile, &law, 7);
        cube.for_each_site(|i, s| {
            assert_eq!(f.potential()[i], profile.envelope(s) * f.raw()[i]);
        });
        assert_eq!(f, SiteField::sample(cube, &profile, &law, 7));
    }

    #[test]
    fn length_checked() {
        let cube = Cube::new(1, 1).unwrap();
        assert!(SiteField::from_potential(cube, vec![0.0; 4]).is_err());
        assert!(SiteField::from_raw(cube, &PotentialProfile::Constant { eta: 1.0 }, vec![1.0]).is_err());
    }

    #[test]
    fn weighted_sum_constant_profile() {
        let cube = Cube::new(3, 2).unwrap();
        let f = SiteField::from_raw(cube, &PotentialProfile::Constant { eta: 0.1 }, vec![1.0; 125]).unwrap();
        assert!((f.weighted_abs_sum() - 12.5).abs() < 1e-12);
    }
}
