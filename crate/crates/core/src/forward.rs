//! Sparse forward FFT by index flipping.
//!
//! For `y = F_N x` we have `N J' x = F_N y`, where `J'` maps index `k` to
//! `-k mod N`. Feeding `w = N J' x` to the inverse algorithm as the
//! "spectrum" therefore recovers the sparse `y`.

use num_complex::Complex64;

use crate::config::Config;
use crate::error::{Error, Result};
use crate::exact_log2;
use crate::oracle::{SpectrumOracle, SpectrumSource};
use crate::reconstruct::{run_sparse_ifft, SparseResult};

/// `w_k = N x_{(-k) mod N}`, evaluated on access.
#[derive(Debug, Clone, PartialEq)]
pub struct FlippedSignal {
    x: Vec<Complex64>,
}

impl FlippedSignal {
    pub fn new(x: Vec<Complex64>) -> Result<Self> {
        exact_log2(x.len()).ok_or(Error::NotPowerOfTwo(x.len()))?;
        if x.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::InvalidArgument("input contains non-finite values".into()));
        }
        Ok(Self { x })
    }
}

impl SpectrumSource for FlippedSignal {
    fn len(&self) -> usize {
        self.x.len()
    }

    fn value(&self, k: usize) -> Complex64 {
        let n = self.x.len();
        self.x[(n - k) % n] * n as f64
    }
}

pub fn flip_oracle(x: Vec<Complex64>) -> Result<SpectrumOracle<FlippedSignal>> {
    SpectrumOracle::new(FlippedSignal::new(x)?)
}

/// Sparse `F_N x` for a dense `x` whose transform is sparse.
pub fn run_sparse_fft(x: &[Complex64], config: &Config) -> Result<SparseResult> {
    let oracle = flip_oracle(x.to_vec())?;
    run_sparse_ifft(&oracle, config)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fft::{fft, ifft};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn constant_input() {
        let oracle = flip_oracle(vec![c(0.5, -1.0); 16]).unwrap();
        for k in 0..16 {
            assert_eq!(oracle.fetch(k).unwrap(), c(8.0, -16.0));
        }
        assert_eq!(oracle.accesses(), 16);
    }

    #[test]
    fn flipped_spike() {
        let mut x = vec![c(0.0, 0.0); 8];
        x[1] = c(1.0, 0.0);
        let oracle = flip_oracle(x).unwrap();
        assert_eq!(oracle.accesses(), 0);
        for k in 0..8 {
            let want = if k == 7 { c(8.0, 0.0) } else { c(0.0, 0.0) };
            assert_eq!(oracle.fetch(k).unwrap(), want);
        }
    }

    #[test]
    fn flip_identity() {
        // ifft(v) = (1/N) J' fft(v).
        let v: Vec<_> = (0..64).map(|k| c((k as f64 * 0.37).sin(), (k as f64 * 1.3).cos())).collect();
        let f = fft(&v).unwrap();
        let inv = ifft(&v).unwrap();
        for k in 0..64 {
            let flipped = f[(64 - k) % 64] / 64.0;
            assert!((inv[k] - flipped).norm() <= 1e-12 * (1.0 + inv[k].norm()));
        }
    }

    #[test]
    fn all_ones_has_dc_spectrum() {
        let result = run_sparse_fft(&vec![c(1.0, 0.0); 1024], &Config::default()).unwrap();
        assert_eq!(result.support, vec![0]);
        assert!((result.values[0] - c(1024.0, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn rejects_bad_length() {
        assert!(flip_oracle(vec![c(1.0, 0.0); 3]).is_err());
        assert!(run_sparse_fft(&[c(1.0, 0.0)], &Config::default()).is_err());
    }
}
