use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::Cube;
use crate::error::{Error, Result};

/// Single-site distribution ν of the raw disorder q(n).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DisorderLaw {
    /// Uniform on [-w, w].
    UniformSym { half_width: f64 },
    /// Uniform on [0, 1].
    Uniform01,
    /// +1 with probability p, -1 otherwise.
    Bernoulli { p: f64 },
    /// Centered normal with standard deviation σ.
    Gaussian { sigma: f64 },
}

impl DisorderLaw {
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            DisorderLaw::UniformSym { half_width } => half_width >= 0.0 && half_width.is_finite(),
            DisorderLaw::Uniform01 => true,
            DisorderLaw::Bernoulli { p } => (0.0..=1.0).contains(&p),
            DisorderLaw::Gaussian { sigma } => sigma >= 0.0 && sigma.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Config(format!("invalid disorder law {self:?}")))
        }
    }

    /// γ = ∫|x| dν(x).
    pub fn first_abs_moment(&self) -> f64 {
        match *self {
            DisorderLaw::UniformSym { half_width } => 0.5 * half_width,
            DisorderLaw::Uniform01 => 0.5,
            DisorderLaw::Bernoulli { .. } => 1.0,
            DisorderLaw::Gaussian { sigma } => sigma * (2.0 / std::f64::consts::PI).sqrt(),
        }
    }

    /// Var |q| = E q² − γ².
    pub fn abs_variance(&self) -> f64 {
        match *self {
            DisorderLaw::UniformSym { half_width } => half_width * half_width / 12.0,
            DisorderLaw::Uniform01 => 1.0 / 12.0,
            DisorderLaw::Bernoulli { .. } => 0.0,
            DisorderLaw::Gaussian { sigma } => sigma * sigma * (1.0 - 2.0 / std::f64::consts::PI),
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            DisorderLaw::UniformSym { half_width } => half_width * (2.0 * rng.random::<f64>() - 1.0),
            DisorderLaw::Uniform01 => rng.random::<f64>(),
            DisorderLaw::Bernoulli { p } => {
                if rng.random::<f64>() < p {
                    1.0
                } else {
                    -1.0
                }
            }
            DisorderLaw::Gaussian { sigma } => {
                let z: f64 = rng.sample(StandardNormal);
                sigma * z
            }
        }
    }

    /// The raw value at one site; a pure function of (seed, site, law).
    pub fn sample_at(&self, master_seed: u64, site: &[i64]) -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(site_key(master_seed, site));
        self.sample(&mut rng)
    }
}

fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Per-site stream key derived from the master seed and the coordinates.
///
/// Independent of cube size, so the same site carries the same value in
/// every cube that contains it.
pub fn site_key(master_seed: u64, site: &[i64]) -> u64 {
    const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;
    let mut key = mix64(master_seed ^ GOLDEN);
    key = mix64(key ^ (site.len() as u64).wrapping_mul(GOLDEN));
    for &n in site {
        key = mix64(key.wrapping_add(GOLDEN) ^ (n as u64));
    }
    key
}

/// Raw disorder q on every site of `cube`, in lexicographic order.
pub fn sample_disorder(law: &DisorderLaw, master_seed: u64, cube: &Cube) -> Vec<f64> {
    let mut q = Vec::with_capacity(cube.len());
    cube.for_each_site(|_, s| q.push(law.sample_at(master_seed, s)));
    q
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degenerate_bernoulli_is_constant() {
        let cube = Cube::new(2, 3).unwrap();
        for seed in [0, 1, 99] {
            let q = sample_disorder(&DisorderLaw::Bernoulli { p: 1.0 }, seed, &cube);
            assert!(q.iter().all(|&x| x == 1.0));
        }
    }

    #[test]
    fn same_seed_same_value() {
        let law = DisorderLaw::UniformSym { half_width: 1.0 };
        let a = law.sample_at(17, &[1, -2, 3]);
        let b = law.sample_at(17, &[1, -2, 3]);
        assert_eq!(a.to_bits(), b.to_bits());
        assert_ne!(a, law.sample_at(18, &[1, -2, 3]));
        assert_ne!(a, law.sample_at(17, &[1, -2, 2]));
    }

    #[test]
    fn values_do_not_depend_on_cube_size() {
        let law = DisorderLaw::Gaussian { sigma: 1.0 };
        let small = Cube::new(2, 1).unwrap();
        let big = Cube::new(2, 3).unwrap();
        let qs = sample_disorder(&law, 5, &small);
        let qb = sample_disorder(&law, 5, &big);
        for (i, s) in small.sites().iter().enumerate() {
            assert_eq!(qs[i], qb[big.index_of(s).unwrap()]);
        }
    }

    #[test]
    fn uniform_abs_mean_monte_carlo() {
        let law = DisorderLaw::UniformSym { half_width: 1.0 };
        let n = 1_000_000u64;
        let mean = (0..n).map(|i| law.sample_at(2024, &[i as i64]).abs()).sum::<f64>() / n as f64;
        let sigma = (law.abs_variance() / n as f64).sqrt();
        assert!((mean - 0.5).abs() < 3.0 * sigma, "mean {mean}");
    }

    #[test]
    fn closed_form_moments() {
        assert_eq!(DisorderLaw::UniformSym { half_width: 1.0 }.first_abs_moment(), 0.5);
        assert_eq!(DisorderLaw::Bernoulli { p: 0.3 }.first_abs_moment(), 1.0);
        let g = DisorderLaw::Gaussian { sigma: 1.0 }.first_abs_moment();
        assert!((g - 0.797_884_6).abs() < 1e-7);
    }
}
