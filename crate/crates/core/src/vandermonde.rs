//! Rectangular Vandermonde factors on stretched roots of unity.
//!
//! At level `j` with support `n_1 < ... < n_M` in `[0, 2^j)`, stretch
//! `sigma` and `M'` rows, the factor is `V[p, r] = w^{sigma p n_r}` with
//! `w = e^{-2 pi i / 2^j}`. This module builds it, bounds its spectral
//! condition number two ways (minimal node distance, and Gershgorin discs
//! on the Gram matrix `V^* V`), and solves the restricted system of one
//! reconstruction level.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg;
use crate::{mul_mod, root_of_unity};

/// The tuple `(j, sigma, nodes, M')` defining `V_{M',M}(sigma)`.
///
/// Construction enforces: nodes strictly increasing in `[0, 2^j)`,
/// `1 <= sigma < 2^j`, `M <= M' <= 2^j`, and pairwise distinct stretched
/// nodes `sigma n_r mod 2^j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VandermondeSpec {
    level: u32,
    sigma: u64,
    nodes: Vec<usize>,
    rows: usize,
}

impl VandermondeSpec {
    pub fn new(level: u32, sigma: u64, nodes: Vec<usize>, rows: usize) -> Result<Self> {
        if level == 0 || level > 62 {
            return Err(Error::InvalidArgument(format!("unsupported level {level}")));
        }
        let modulus = 1u64 << level;
        check_nodes(&nodes, modulus)?;
        if sigma == 0 || sigma >= modulus {
            return Err(Error::InvalidArgument(format!(
                "sigma = {sigma} outside [1, {modulus})"
            )));
        }
        if rows < nodes.len() || rows as u64 > modulus {
            return Err(Error::InvalidArgument(format!(
                "row count {rows} outside [{}, {modulus}]",
                nodes.len()
            )));
        }
        min_periodic_distance(&nodes, sigma, modulus)?;
        Ok(Self { level, sigma, nodes, rows })
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn modulus(&self) -> u64 {
        1 << self.level
    }

    pub fn sigma(&self) -> u64 {
        self.sigma
    }

    pub fn nodes(&self) -> &[usize] {
        &self.nodes
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn sparsity(&self) -> usize {
        self.nodes.len()
    }

    /// Same nodes and stretch with a different row count.
    pub fn with_rows(&self, rows: usize) -> Result<Self> {
        Self::new(self.level, self.sigma, self.nodes.clone(), rows)
    }

    /// `sigma n_r mod 2^j` in node order.
    pub fn stretched(&self) -> Vec<u64> {
        stretch(&self.nodes, self.sigma, self.modulus())
    }

    /// Stretched nodes sorted ascending; the multiset that determines `V`
    /// up to a column permutation.
    pub fn stretched_sorted(&self) -> Vec<u64> {
        let mut s = self.stretched();
        s.sort_unstable();
        s
    }
}

/// Condition estimates for one [`VandermondeSpec`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionReport {
    pub moitra_bound: Option<f64>,
    pub gershgorin_bound: Option<f64>,
    /// `max_k S_k`.
    pub max_row_sum: f64,
    pub min_distance: u64,
}

fn check_nodes(nodes: &[usize], modulus: u64) -> Result<()> {
    if nodes.is_empty() {
        return Err(Error::InvalidArgument("node set is empty".into()));
    }
    if nodes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("nodes must be strictly increasing".into()));
    }
    let last = *nodes.last().unwrap();
    if last as u64 >= modulus {
        return Err(Error::IndexOutOfRange { index: last, len: modulus as usize });
    }
    Ok(())
}

fn stretch(nodes: &[usize], sigma: u64, modulus: u64) -> Vec<u64> {
    nodes.iter().map(|&n| mul_mod(sigma, n as u64, modulus)).collect()
}

/// `sin(pi t / m)` with `t` folded into `(-m, m]` first.
fn sin_pi_ratio(t: i128, m: i128) -> f64 {
    let mut t = t.rem_euclid(2 * m);
    if t > m {
        t -= 2 * m;
    }
    if t == 0 || t == m {
        return 0.0;
    }
    (std::f64::consts::PI * t as f64 / m as f64).sin()
}

/// Signed representative of `a - b mod m` in `(-m/2, m/2]`.
fn centered_difference(a: u64, b: u64, m: u64) -> i128 {
    let d = (a as i128 - b as i128).rem_euclid(m as i128);
    if 2 * d > m as i128 {
        d - m as i128
    } else {
        d
    }
}

/// Smallest cyclic gap between the stretched nodes `sigma n_r mod m`.
///
/// A single node is maximally spread and yields `m`.
pub fn min_periodic_distance(nodes: &[usize], sigma: u64, modulus: u64) -> Result<u64> {
    if nodes.is_empty() {
        return Err(Error::InvalidArgument("node set is empty".into()));
    }
    if nodes.len() == 1 {
        return Ok(modulus);
    }
    let mut s = stretch(nodes, sigma, modulus);
    s.sort_unstable();
    let wrap = s[0] + modulus - s[s.len() - 1];
    let d = s.windows(2).map(|w| w[1] - w[0]).fold(wrap, u64::min);
    if d == 0 {
        return Err(Error::Degenerate(format!(
            "sigma = {sigma} maps two nodes onto the same residue mod {modulus}"
        )));
    }
    Ok(d)
}

/// Distance-based bound `sqrt((M' + m/d) / (M' - m/d))`, present only when
/// `M' > m/d`.
pub fn moitra_bound(rows: usize, min_distance: u64, modulus: u64) -> Option<f64> {
    if min_distance == 0 {
        return None;
    }
    let ratio = modulus as f64 / min_distance as f64;
    let rows = rows as f64;
    (rows > ratio).then(|| ((rows + ratio) / (rows - ratio)).sqrt())
}

/// Bound `sqrt((M' + S*) / (M' - S*))`, present only when `S* < M'`.
pub fn bound_from_row_sum(rows: usize, max_row_sum: f64) -> Option<f64> {
    let rows = rows as f64;
    (max_row_sum < rows).then(|| ((rows + max_row_sum) / (rows - max_row_sum)).sqrt())
}

/// Off-diagonal absolute row sums of `V^* V`, i.e.
/// `S_k = sum_{l != k} |sin(M' pi D / m) / sin(pi D / m)|` with
/// `D = sigma (n_k - n_l)`.
pub fn gershgorin_row_sums(spec: &VandermondeSpec) -> Vec<f64> {
    let m = spec.modulus();
    let s = spec.stretched();
    let rows = spec.rows() as i128;
    let mut sums = vec![0.0; s.len()];
    for k in 0..s.len() {
        for l in k + 1..s.len() {
            let delta = centered_difference(s[k], s[l], m);
            let num = sin_pi_ratio(rows * delta, m as i128);
            let den = sin_pi_ratio(delta, m as i128);
            let term = (num / den).abs();
            sums[k] += term;
            sums[l] += term;
        }
    }
    sums
}

pub fn gershgorin_bound(spec: &VandermondeSpec) -> Option<f64> {
    let max = gershgorin_row_sums(spec).into_iter().fold(0.0, f64::max);
    bound_from_row_sum(spec.rows(), max)
}

/// Row-count-free majorant `S~_k = sum_{l != k} 1 / |sin(pi sigma (n_k - n_l) / m)|`.
pub fn approx_row_sums(nodes: &[usize], sigma: u64, modulus: u64) -> Result<Vec<f64>> {
    check_nodes(nodes, modulus)?;
    min_periodic_distance(nodes, sigma, modulus)?;
    let s = stretch(nodes, sigma, modulus);
    let mut sums = vec![0.0; s.len()];
    for k in 0..s.len() {
        for l in k + 1..s.len() {
            let delta = centered_difference(s[k], s[l], modulus);
            let term = 1.0 / sin_pi_ratio(delta, modulus as i128).abs();
            sums[k] += term;
            sums[l] += term;
        }
    }
    Ok(sums)
}

pub fn condition_report(spec: &VandermondeSpec) -> ConditionReport {
    let max_row_sum = gershgorin_row_sums(spec).into_iter().fold(0.0, f64::max);
    let min_distance = min_periodic_distance(spec.nodes(), spec.sigma(), spec.modulus())
        .expect("spec construction rejects colliding nodes");
    ConditionReport {
        moitra_bound: moitra_bound(spec.rows(), min_distance, spec.modulus()),
        gershgorin_bound: bound_from_row_sum(spec.rows(), max_row_sum),
        max_row_sum,
        min_distance,
    }
}

/// The explicit `M' x M` matrix `(w^{sigma p n_r})`.
pub fn build_vandermonde(spec: &VandermondeSpec) -> DMatrix<Complex64> {
    let m = spec.modulus();
    let s = spec.stretched();
    DMatrix::from_fn(spec.rows(), s.len(), |p, r| root_of_unity(mul_mod(p as u64, s[r], m), m))
}

/// `A = V diag(w_{2^(j+1)}^{n_r})`, the coefficient matrix of one level.
pub fn coefficient_matrix(spec: &VandermondeSpec) -> DMatrix<Complex64> {
    let mut a = build_vandermonde(spec);
    let twice = 2 * spec.modulus();
    for (r, &n) in spec.nodes().iter().enumerate() {
        let w = root_of_unity(n as u64, twice);
        a.column_mut(r).iter_mut().for_each(|z| *z *= w);
    }
    a
}

pub fn singular_values(spec: &VandermondeSpec) -> Vec<f64> {
    linalg::singular_values(&build_vandermonde(spec))
}

/// True `kappa_2(V)` from the singular values.
pub fn spectral_condition(spec: &VandermondeSpec) -> f64 {
    linalg::condition_number(&build_vandermonde(spec))
}

#[derive(Debug, Clone, PartialEq)]
pub struct RestrictedSolution {
    /// `x~_0^(j+1)`, the restriction of the first half of `x^(j+1)`.
    pub lower: Vec<Complex64>,
    /// `||A y - z||_2` of the least-squares solve.
    pub residual: f64,
}

/// Solves `A (2 x~_0 - x~) = z` in the least-squares sense and returns `x~_0`.
pub fn solve_restricted_system(
    spec: &VandermondeSpec,
    prev_values: &[Complex64],
    rhs: &[Complex64],
) -> Result<RestrictedSolution> {
    if prev_values.len() != spec.sparsity() {
        return Err(Error::InvalidArgument(format!(
            "expected {} previous values, got {}",
            spec.sparsity(),
            prev_values.len()
        )));
    }
    if rhs.len() != spec.rows() {
        return Err(Error::InvalidArgument(format!(
            "expected {} right-hand side values, got {}",
            spec.rows(),
            rhs.len()
        )));
    }
    let a = coefficient_matrix(spec);
    let ls = linalg::least_squares(&a, rhs)?;
    let lower = ls.solution.iter().zip(prev_values).map(|(y, x)| (y + x) * 0.5).collect();
    Ok(RestrictedSolution { lower, residual: ls.residual })
}
