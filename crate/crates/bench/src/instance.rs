//! Seeded sparse test vectors with entries in the first quadrant.
//!
//! Generator: `ChaCha8Rng::seed_from_u64(seed)`. Trial `t` of a sweep with
//! base seed `s` uses seed `s + t` (wrapping), see [`trial_seed`]. ChaCha8
//! output is specified bit-for-bit, so instances are identical across
//! platforms.

use std::f64::consts::FRAC_PI_2;

use dsfft::{Complex64, SparseResult, SparseSignal, SpectrumOracle};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Relative value tolerance for a successful recovery.
pub const VALUE_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Error, PartialEq)]
pub enum InstanceError {
    #[error("need 1 <= J <= 40, got J = {0}")]
    Length(u32),
    #[error("cannot draw M = {m} distinct indices from 2^{j}")]
    Sparsity { j: u32, m: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub log2_len: u32,
    pub sparsity: usize,
    pub seed: u64,
    pub support: Vec<usize>,
    pub values: Vec<Complex64>,
}

pub fn trial_seed(base: u64, trial: usize) -> u64 {
    base.wrapping_add(trial as u64)
}

/// Support uniform without replacement over `[0, 2^J)`; values with modulus
/// uniform in `[1, 2]` and phase uniform in `[0, pi/2]`.
pub fn gen_instance(log2_len: u32, sparsity: usize, seed: u64) -> Result<Instance, InstanceError> {
    if log2_len == 0 || log2_len > 40 {
        return Err(InstanceError::Length(log2_len));
    }
    let len = 1usize << log2_len;
    if sparsity == 0 || sparsity > len {
        return Err(InstanceError::Sparsity { j: log2_len, m: sparsity });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut support = sample(&mut rng, len, sparsity).into_vec();
    support.sort_unstable();
    let values = support
        .iter()
        .map(|_| {
            let modulus = rng.random_range(1.0..=2.0);
            let phase = rng.random_range(0.0..=FRAC_PI_2);
            Complex64::from_polar(modulus, phase)
        })
        .map(|z| Complex64::new(z.re.max(0.0), z.im.max(0.0)))
        .collect();
    Ok(Instance { log2_len, sparsity, seed, support, values })
}

impl Instance {
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        1 << self.log2_len
    }

    pub fn signal(&self) -> SparseSignal {
        SparseSignal::new(self.log2_len, self.support.clone(), self.values.clone())
            .expect("generated instances are valid signals")
    }

    /// Oracle evaluating `x_hat_k` on demand in `O(M)`.
    pub fn oracle(&self) -> SpectrumOracle<SparseSignal> {
        SpectrumOracle::new(self.signal()).expect("length is a power of two >= 2")
    }

    pub fn to_dense(&self) -> Vec<Complex64> {
        self.signal().to_dense()
    }

    /// Largest relative value error, or `None` when the supports differ.
    pub fn max_relative_error(&self, result: &SparseResult) -> Option<f64> {
        if result.support != self.support {
            return None;
        }
        Some(
            result
                .values
                .iter()
                .zip(&self.values)
                .map(|(got, want)| (got - want).norm() / want.norm())
                .fold(0.0, f64::max),
        )
    }

    /// Exact support equality and every value within [`VALUE_TOLERANCE`].
    pub fn is_recovered(&self, result: &SparseResult) -> bool {
        self.max_relative_error(result).is_some_and(|e| e <= VALUE_TOLERANCE)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use dsfft::check_no_cancellation;

    #[test]
    fn deterministic_in_seed() {
        assert_eq!(gen_instance(12, 8, 42).unwrap(), gen_instance(12, 8, 42).unwrap());
        assert_ne!(gen_instance(12, 8, 42).unwrap(), gen_instance(12, 8, 43).unwrap());
    }

    #[test]
    fn values_in_first_quadrant() {
        for seed in 0..50 {
            let inst = gen_instance(10, 20, seed).unwrap();
            assert_eq!(inst.support.len(), 20);
            assert!(inst.support.windows(2).all(|w| w[0] < w[1]));
            for v in &inst.values {
                assert!(v.re >= 0.0 && v.im >= 0.0);
                assert!(v.norm() >= 1.0 - 1e-12 && v.norm() <= 2.0 + 1e-12);
            }
        }
    }

    #[test]
    fn never_cancels() {
        for seed in 0..1000 {
            let inst = gen_instance(8, 1 + (seed as usize % 15), seed).unwrap();
            assert!(check_no_cancellation(&inst.to_dense(), 1e-8), "seed {seed}");
        }
    }

    #[test]
    fn argument_errors() {
        assert_eq!(gen_instance(0, 1, 0), Err(InstanceError::Length(0)));
        assert_eq!(gen_instance(3, 9, 0), Err(InstanceError::Sparsity { j: 3, m: 9 }));
        assert_eq!(gen_instance(3, 0, 0), Err(InstanceError::Sparsity { j: 3, m: 0 }));
        assert!(gen_instance(3, 8, 0).is_ok());
    }
}
