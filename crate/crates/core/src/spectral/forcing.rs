use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Time-independent sinusoidal forcing `f(x) = Σ_k A_k sin(2πkx + φ_k)`.
///
/// Stream layout: a `ChaCha8Rng` seeded with `seed_from_u64(seed)` draws,
/// for each `k` from `k_min` to `k_max` in turn, `A_k ~ U[-1, 1)` and then
/// `φ_k ~ U[0, 2π)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ForcingSpec {
    pub k_min: usize,
    pub k_max: usize,
    pub amplitudes: Vec<f64>,
    pub phases: Vec<f64>,
    pub seed: u64,
}

impl ForcingSpec {
    pub fn from_seed(k_min: usize, k_max: usize, seed: u64) -> Result<Self> {
        if k_min == 0 || k_min > k_max {
            return Err(Error::arg(format!(
                "forcing band needs 1 <= k_min <= k_max, got {k_min}..{k_max}"
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let count = k_max - k_min + 1;
        let mut amplitudes = Vec::with_capacity(count);
        let mut phases = Vec::with_capacity(count);
        for _ in 0..count {
            amplitudes.push(rng.gen_range(-1.0..1.0));
            phases.push(rng.gen_range(0.0..2.0 * PI));
        }
        Ok(Self {
            k_min,
            k_max,
            amplitudes,
            phases,
            seed,
        })
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.k_min..=self.k_max)
            .zip(self.amplitudes.iter().zip(&self.phases))
            .map(|(k, (a, p))| a * (2.0 * PI * k as f64 * x + p).sin())
            .sum()
    }

    /// Samples on the periodic grid `x_j = j/n`.
    pub fn sample(&self, n: usize) -> Vec<f64> {
        (0..n).map(|j| self.eval(j as f64 / n as f64)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproducible_and_in_range() {
        let a = ForcingSpec::from_seed(1, 128, 42).unwrap();
        let b = ForcingSpec::from_seed(1, 128, 42).unwrap();
        assert_eq!(a, b);
        assert!(a.amplitudes.iter().all(|x| (-1.0..1.0).contains(x)));
        assert!(a.phases.iter().all(|x| (0.0..2.0 * PI).contains(x)));
        assert_ne!(a, ForcingSpec::from_seed(1, 128, 43).unwrap());
    }

    #[test]
    fn bad_band() {
        assert!(ForcingSpec::from_seed(0, 3, 1).is_err());
        assert!(ForcingSpec::from_seed(4, 3, 1).is_err());
    }
}
