//! Access to Fourier coefficients `x_hat_k` with an exact access counter.
//!
//! The counter is the sublinearity certificate: every algorithm in this
//! crate reads the spectrum only through [`SpectrumOracle::fetch`].

use std::sync::atomic::{AtomicU64, Ordering};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::{exact_log2, mul_mod, root_of_unity};

/// A deterministic source of spectrum values.
pub trait SpectrumSource {
    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The coefficient at `k`; callers guarantee `k < len()`.
    fn value(&self, k: usize) -> Complex64;
}

/// A fully materialised spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseSpectrum {
    values: Vec<Complex64>,
}

impl DenseSpectrum {
    pub fn new(values: Vec<Complex64>) -> Result<Self> {
        exact_log2(values.len()).ok_or(Error::NotPowerOfTwo(values.len()))?;
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::InvalidArgument("spectrum contains non-finite values".into()));
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }
}

impl SpectrumSource for DenseSpectrum {
    fn len(&self) -> usize {
        self.values.len()
    }

    fn value(&self, k: usize) -> Complex64 {
        self.values[k]
    }
}

/// An `M`-sparse vector whose spectrum is evaluated on demand in `O(M)` per
/// coefficient; the dense `x_hat` never exists in memory.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseSignal {
    log2_len: u32,
    support: Vec<usize>,
    values: Vec<Complex64>,
}

impl SparseSignal {
    pub fn new(log2_len: u32, support: Vec<usize>, values: Vec<Complex64>) -> Result<Self> {
        if log2_len == 0 || log2_len >= usize::BITS - 1 {
            return Err(Error::InvalidArgument(format!("unsupported log2 length {log2_len}")));
        }
        let len = 1usize << log2_len;
        if support.len() != values.len() {
            return Err(Error::InvalidArgument(format!(
                "support has {} indices but {} values were given",
                support.len(),
                values.len()
            )));
        }
        if support.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument("support must be strictly increasing".into()));
        }
        if let Some(&last) = support.last() {
            if last >= len {
                return Err(Error::IndexOutOfRange { index: last, len });
            }
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::InvalidArgument("signal contains non-finite values".into()));
        }
        Ok(Self { log2_len, support, values })
    }

    pub fn log2_len(&self) -> u32 {
        self.log2_len
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Dense expansion of length `2^J`.
    pub fn to_dense(&self) -> Vec<Complex64> {
        let mut dense = vec![Complex64::new(0.0, 0.0); 1 << self.log2_len];
        for (&n, &v) in self.support.iter().zip(&self.values) {
            dense[n] = v;
        }
        dense
    }
}

impl SpectrumSource for SparseSignal {
    fn len(&self) -> usize {
        1 << self.log2_len
    }

    fn value(&self, k: usize) -> Complex64 {
        let modulus = self.len() as u64;
        self.support
            .iter()
            .zip(&self.values)
            .map(|(&n, &v)| v * root_of_unity(mul_mod(k as u64, n as u64, modulus), modulus))
            .sum()
    }
}

/// Counting wrapper around a [`SpectrumSource`] of length `N = 2^J`, `J >= 1`.
///
/// The counter is atomic, so an oracle may be shared across threads.
#[derive(Debug)]
pub struct SpectrumOracle<S> {
    source: S,
    log2_len: u32,
    accesses: AtomicU64,
}

impl<S: SpectrumSource> SpectrumOracle<S> {
    pub fn new(source: S) -> Result<Self> {
        let len = source.len();
        let log2_len = exact_log2(len).ok_or(Error::NotPowerOfTwo(len))?;
        if log2_len == 0 {
            return Err(Error::InvalidArgument("oracle length must be at least 2".into()));
        }
        Ok(Self { source, log2_len, accesses: AtomicU64::new(0) })
    }

    /// Never zero: construction requires at least two samples.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        1 << self.log2_len
    }

    pub fn log2_len(&self) -> u32 {
        self.log2_len
    }

    pub fn source(&self) -> &S {
        &self.source
    }

    /// Number of successful fetches since creation.
    pub fn accesses(&self) -> u64 {
        self.accesses.load(Ordering::Relaxed)
    }

    pub fn fetch(&self, k: usize) -> Result<Complex64> {
        if k >= self.len() {
            return Err(Error::IndexOutOfRange { index: k, len: self.len() });
        }
        self.accesses.fetch_add(1, Ordering::Relaxed);
        Ok(self.source.value(k))
    }

    /// Coefficient `k` of the transform of the periodization `x^(j)`, which
    /// is `x_hat_{2^(J-j) k}`.
    pub fn subsample_spectrum(&self, level: u32, k: usize) -> Result<Complex64> {
        if level > self.log2_len {
            return Err(Error::LevelOutOfRange { level, max: self.log2_len });
        }
        if k >= 1 << level {
            return Err(Error::IndexOutOfRange { index: k, len: 1 << level });
        }
        self.fetch(k << (self.log2_len - level))
    }

    /// Coefficient `p` of the odd half `z_hat^(j+1)`, i.e.
    /// `x_hat_{2^(J-j-1) (2p + 1)}`, used by every reconstruction level.
    pub(crate) fn fetch_odd(&self, level: u32, p: usize) -> Result<Complex64> {
        debug_assert!(level < self.log2_len);
        self.fetch((2 * p + 1) << (self.log2_len - level - 1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rejects_non_power_of_two() {
        assert_eq!(DenseSpectrum::new(vec![c(0.0, 0.0); 6]), Err(Error::NotPowerOfTwo(6)));
        let one = DenseSpectrum::new(vec![c(1.0, 0.0)]).unwrap();
        assert!(SpectrumOracle::new(one).is_err());
    }

    #[test]
    fn subsample_indices() {
        let values: Vec<_> = (0..16).map(|k| c(k as f64, 0.0)).collect();
        let oracle = SpectrumOracle::new(DenseSpectrum::new(values).unwrap()).unwrap();
        assert_eq!(oracle.subsample_spectrum(0, 0).unwrap(), c(0.0, 0.0));
        assert_eq!(oracle.subsample_spectrum(2, 3).unwrap(), c(12.0, 0.0));
        assert_eq!(oracle.accesses(), 2);
        assert!(oracle.subsample_spectrum(2, 4).is_err());
        assert!(oracle.subsample_spectrum(5, 0).is_err());
        assert!(oracle.fetch(16).is_err());
        assert_eq!(oracle.accesses(), 2);
    }

    #[test]
    fn fetch_is_deterministic_and_counted() {
        let signal = SparseSignal::new(6, vec![1, 40], vec![c(1.0, 2.0), c(0.5, 0.0)]).unwrap();
        let oracle = SpectrumOracle::new(signal).unwrap();
        let a = oracle.fetch(17).unwrap();
        let b = oracle.fetch(17).unwrap();
        assert_eq!(a, b);
        assert_eq!(oracle.accesses(), 2);
    }

    #[test]
    fn sparse_signal_validation() {
        assert!(SparseSignal::new(3, vec![2, 1], vec![c(1.0, 0.0); 2]).is_err());
        assert!(SparseSignal::new(3, vec![1, 8], vec![c(1.0, 0.0); 2]).is_err());
        assert!(SparseSignal::new(3, vec![1], vec![]).is_err());
        assert!(SparseSignal::new(0, vec![], vec![]).is_err());
    }

    #[test]
    fn sparse_spectrum_of_spike() {
        // x = e_1 in C^8 has x_hat_k = w_8^k.
        let signal = SparseSignal::new(3, vec![1], vec![c(1.0, 0.0)]).unwrap();
        for k in 0..8 {
            let angle = -2.0 * std::f64::consts::PI * k as f64 / 8.0;
            assert!((signal.value(k) - c(angle.cos(), angle.sin())).norm() < 1e-15);
        }
    }

    #[test]
    fn concurrent_fetches_are_all_counted() {
        let signal = SparseSignal::new(10, vec![5], vec![c(1.0, 0.0)]).unwrap();
        let oracle = SpectrumOracle::new(signal).unwrap();
        std::thread::scope(|s| {
            for t in 0..4 {
                let oracle = &oracle;
                s.spawn(move || {
                    for k in 0..250 {
                        oracle.fetch(t * 250 + k).unwrap();
                    }
                });
            }
        });
        assert_eq!(oracle.accesses(), 1000);
    }
}
