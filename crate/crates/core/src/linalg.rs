//! Dense complex least squares by Householder QR, and singular values.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Relative tolerance on `min |R_kk| / max |R_kk|` below which a system is
/// reported as numerically rank deficient.
pub const RANK_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct LeastSquares {
    pub solution: Vec<Complex64>,
    /// `||A y - b||_2` evaluated on the original matrix.
    pub residual: f64,
    /// `min |R_kk| / max |R_kk|`.
    pub diagonal_ratio: f64,
}

/// Solves `min ||A y - b||_2` for a tall (`rows >= cols`) matrix.
pub fn least_squares(a: &DMatrix<Complex64>, b: &[Complex64]) -> Result<LeastSquares> {
    let (rows, cols) = a.shape();
    if rows < cols || cols == 0 {
        return Err(Error::InvalidArgument(format!(
            "least squares needs rows >= cols >= 1, got {rows}x{cols}"
        )));
    }
    if b.len() != rows {
        return Err(Error::InvalidArgument(format!(
            "right-hand side has length {} but the matrix has {rows} rows",
            b.len()
        )));
    }

    let mut r = a.clone();
    let mut qtb = b.to_vec();
    let mut v = vec![Complex64::new(0.0, 0.0); rows];

    for k in 0..cols {
        let norm_x = (k..rows).map(|i| r[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        if norm_x == 0.0 {
            continue;
        }
        let head = r[(k, k)];
        let phase = if head.norm() == 0.0 { Complex64::new(1.0, 0.0) } else { head / head.norm() };
        let alpha = -phase * norm_x;

        let tail = &mut v[k..rows];
        for (i, slot) in tail.iter_mut().enumerate() {
            *slot = r[(k + i, k)];
        }
        tail[0] -= alpha;
        let v_norm_sqr: f64 = tail.iter().map(|z| z.norm_sqr()).sum();
        if v_norm_sqr == 0.0 {
            continue;
        }
        let scale = 2.0 / v_norm_sqr;

        for col in k + 1..cols {
            let dot: Complex64 = tail.iter().enumerate().map(|(i, vi)| vi.conj() * r[(k + i, col)]).sum();
            let f = dot * scale;
            for (i, vi) in tail.iter().enumerate() {
                r[(k + i, col)] -= f * vi;
            }
        }
        let dot: Complex64 = tail.iter().zip(&qtb[k..]).map(|(vi, bi)| vi.conj() * bi).sum();
        let f = dot * scale;
        for (bi, vi) in qtb[k..].iter_mut().zip(tail.iter()) {
            *bi -= f * vi;
        }

        r[(k, k)] = alpha;
        for i in k + 1..rows {
            r[(i, k)] = Complex64::new(0.0, 0.0);
        }
    }

    let diag: Vec<f64> = (0..cols).map(|k| r[(k, k)].norm()).collect();
    let max = diag.iter().cloned().fold(0.0, f64::max);
    let min = diag.iter().cloned().fold(f64::INFINITY, f64::min);
    let ratio = if max > 0.0 { min / max } else { 0.0 };
    if ratio.is_nan() || ratio < RANK_TOLERANCE {
        return Err(Error::IllConditioned { ratio });
    }

    let mut y = vec![Complex64::new(0.0, 0.0); cols];
    for k in (0..cols).rev() {
        let acc: Complex64 = (k + 1..cols).map(|c| r[(k, c)] * y[c]).sum();
        y[k] = (qtb[k] - acc) / r[(k, k)];
    }

    let residual = (0..rows)
        .map(|i| {
            let ay: Complex64 = (0..cols).map(|c| a[(i, c)] * y[c]).sum();
            (ay - b[i]).norm_sqr()
        })
        .sum::<f64>()
        .sqrt();

    Ok(LeastSquares { solution: y, residual, diagonal_ratio: ratio })
}

/// Singular values, descending.
pub fn singular_values(a: &DMatrix<Complex64>) -> Vec<f64> {
    let mut s: Vec<f64> = a.clone().svd(false, false).singular_values.iter().cloned().collect();
    s.sort_by(|x, y| y.total_cmp(x));
    s
}

/// Spectral condition number `sigma_max / sigma_min`; infinite when singular.
pub fn condition_number(a: &DMatrix<Complex64>) -> f64 {
    let s = singular_values(a);
    match (s.first(), s.last()) {
        (Some(&hi), Some(&lo)) if lo > 0.0 => hi / lo,
        _ => f64::INFINITY,
    }
}
