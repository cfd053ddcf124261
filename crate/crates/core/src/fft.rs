//! Iterative in-place radix-2 FFT.
//!
//! Forward convention: `X_k = sum_m v_m w^{km}` with `w = e^{-2 pi i / n}`.
//! The inverse is scaled by `1/n`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::{exact_log2, root_of_unity};

/// Twiddles `w^k`, `k < n/2`, for one transform size.
#[derive(Debug)]
struct Plan {
    twiddles: Vec<Complex64>,
}

impl Plan {
    fn new(n: usize) -> Self {
        let twiddles = (0..n / 2).map(|k| root_of_unity(k as u64, n as u64)).collect();
        Self { twiddles }
    }
}

fn plan(n: usize) -> Arc<Plan> {
    static PLANS: OnceLock<Mutex<HashMap<usize, Arc<Plan>>>> = OnceLock::new();
    let plans = PLANS.get_or_init(Default::default);
    let mut guard = plans.lock().unwrap_or_else(|e| e.into_inner());
    guard.entry(n).or_insert_with(|| Arc::new(Plan::new(n))).clone()
}

fn bit_reverse_permute(data: &mut [Complex64]) {
    let n = data.len();
    let bits = n.trailing_zeros();
    if bits == 0 {
        return;
    }
    for i in 0..n {
        let j = i.reverse_bits() >> (usize::BITS - bits);
        if i < j {
            data.swap(i, j);
        }
    }
}

fn transform_in_place(data: &mut [Complex64], inverse: bool) {
    let n = data.len();
    if n <= 1 {
        return;
    }
    let plan = plan(n);
    bit_reverse_permute(data);
    let mut half = 1;
    while half < n {
        let stride = n / (2 * half);
        for block in data.chunks_exact_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            for (k, (a, b)) in lo.iter_mut().zip(hi.iter_mut()).enumerate() {
                let w = plan.twiddles[k * stride];
                let w = if inverse { w.conj() } else { w };
                let t = *b * w;
                *b = *a - t;
                *a += t;
            }
        }
        half *= 2;
    }
}

/// Forward DFT of a power-of-two length vector.
pub fn fft(v: &[Complex64]) -> Result<Vec<Complex64>> {
    exact_log2(v.len()).ok_or(Error::NotPowerOfTwo(v.len()))?;
    let mut out = v.to_vec();
    transform_in_place(&mut out, false);
    Ok(out)
}

/// Inverse DFT, `ifft(fft(v)) == v`.
pub fn ifft(v: &[Complex64]) -> Result<Vec<Complex64>> {
    exact_log2(v.len()).ok_or(Error::NotPowerOfTwo(v.len()))?;
    let mut out = v.to_vec();
    transform_in_place(&mut out, true);
    let scale = 1.0 / v.len() as f64;
    out.iter_mut().for_each(|x| *x *= scale);
    Ok(out)
}
