//! Periodization of vectors and the no-cancellation model check.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exact_log2;

/// Folds `x` (length `2^J`) with period `2^level`:
/// `result[k] = sum_l x[k + 2^level * l]`.
pub fn periodize(x: &[Complex64], level: u32) -> Result<Vec<Complex64>> {
    let log2_len = exact_log2(x.len()).ok_or(Error::NotPowerOfTwo(x.len()))?;
    if level > log2_len {
        return Err(Error::LevelOutOfRange { level, max: log2_len });
    }
    let period = 1usize << level;
    let mut folded = x[..period].to_vec();
    for chunk in x[period..].chunks_exact(period) {
        for (acc, v) in folded.iter_mut().zip(chunk) {
            *acc += v;
        }
    }
    Ok(folded)
}

/// Halves a periodization: `x^(j+1) -> x^(j)` by adding its two halves.
fn fold_once(x: &[Complex64]) -> Vec<Complex64> {
    let (lo, hi) = x.split_at(x.len() / 2);
    lo.iter().zip(hi).map(|(a, b)| a + b).collect()
}

/// True iff every entry with `|x_k| > epsilon` stays above `epsilon` in
/// every coarser periodization, at index `k mod 2^j`.
///
/// Returns `false` for inputs whose length is not a power of two.
pub fn check_no_cancellation(x: &[Complex64], epsilon: f64) -> bool {
    if exact_log2(x.len()).is_none() {
        return false;
    }
    let significant: Vec<usize> = (0..x.len()).filter(|&k| x[k].norm() > epsilon).collect();
    let mut level = fold_once_or_empty(x);
    while !level.is_empty() {
        let mask = level.len() - 1;
        if significant.iter().any(|&k| level[k & mask].norm() <= epsilon) {
            return false;
        }
        level = fold_once_or_empty(&level);
    }
    true
}

fn fold_once_or_empty(x: &[Complex64]) -> Vec<Complex64> {
    if x.len() <= 1 {
        Vec::new()
    } else {
        fold_once(x)
    }
}

/// Dense vector of length `len` holding `values` at `support`.
pub fn expand(support: &[usize], values: &[Complex64], len: usize) -> Vec<Complex64> {
    let mut dense = vec![Complex64::new(0.0, 0.0); len];
    for (&n, &v) in support.iter().zip(values) {
        dense[n] = v;
    }
    dense
}
