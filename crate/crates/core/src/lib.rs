//! Deterministic sparse sublinear FFT.
//!
//! Reconstructs an `M`-sparse vector `x` of length `N = 2^J` from its
//! discrete Fourier transform in `O(M^2 log N)` operations by recovering
//! the periodizations `x^(j)` level by level. Each sparse level solves a
//! small least-squares system whose coefficient matrix is a rectangular
//! Vandermonde matrix on stretched roots of unity; the stretch factor and
//! the row count are chosen from cheap condition-number estimates so the
//! systems stay well conditioned.
//!
//! The forward problem (a sparse spectrum from a dense vector) reuses the
//! same machinery through an index-flipped oracle, see [`forward`].
//!
//! ```
//! use dsfft::{run_sparse_ifft, Config, SparseSignal, SpectrumOracle, Complex64};
//!
//! let signal = SparseSignal::new(10, vec![3, 700], vec![Complex64::new(1.0, 0.5), Complex64::new(2.0, 1.0)]).unwrap();
//! let oracle = SpectrumOracle::new(signal).unwrap();
//! let result = run_sparse_ifft(&oracle, &Config::default()).unwrap();
//! assert_eq!(result.support, vec![3, 700]);
//! ```

pub mod config;
pub mod error;
pub mod exec;
pub mod fft;
pub mod forward;
pub mod linalg;
pub mod oracle;
pub mod reconstruct;
pub mod rows;
pub mod sigma;
pub mod signal;
pub mod vandermonde;

pub use num_complex::Complex64;

pub use config::{Config, RowPolicy, SigmaPolicy};
pub use error::{Error, Result};
pub use exec::Execution;
pub use forward::{flip_oracle, run_sparse_fft, FlippedSignal};
pub use oracle::{DenseSpectrum, SparseSignal, SpectrumOracle, SpectrumSource};
pub use reconstruct::{
    run_known_sparsity, run_sparse_ifft, Branch, LevelRecord, LevelState, SparseResult,
};
pub use signal::{check_no_cancellation, periodize};
pub use vandermonde::{ConditionReport, VandermondeSpec};

/// Double-precision complex scalar used for every signal and spectrum value.
pub type ComplexScalar = Complex64;

/// `log2(n)` for a power of two `n >= 1`, `None` otherwise.
pub(crate) fn exact_log2(n: usize) -> Option<u32> {
    if n != 0 && n.is_power_of_two() {
        Some(n.trailing_zeros())
    } else {
        None
    }
}

/// `e^{-2 pi i e / m}` for an exponent already reduced into `[0, m)`.
///
/// The angle is folded into `(-pi, pi]` before evaluation so large moduli do
/// not lose accuracy in the trigonometric argument.
pub(crate) fn root_of_unity(exponent: u64, modulus: u64) -> Complex64 {
    debug_assert!(exponent < modulus);
    let signed = if 2 * exponent > modulus {
        exponent as f64 - modulus as f64
    } else {
        exponent as f64
    };
    let angle = -2.0 * std::f64::consts::PI * signed / modulus as f64;
    let (s, c) = angle.sin_cos();
    Complex64::new(c, s)
}

/// `(a * b) mod m` without overflow.
pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}
