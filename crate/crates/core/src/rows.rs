//! Number of Vandermonde rows `M'` per sparse level.

use crate::error::{Error, Result};
use crate::vandermonde::{gershgorin_bound, VandermondeSpec};

/// `M' = c M` with `c = min(max(1, floor(m / (M d))), c_max)`, capped at `m`.
pub fn simple_row_count(sparsity: usize, min_distance: u64, modulus: u64, c_max: usize) -> usize {
    let sparsity = sparsity.max(1) as u64;
    let spread = modulus / (sparsity * min_distance.max(1));
    let c = spread.max(1).min(c_max.max(1) as u64);
    (c * sparsity).min(modulus) as usize
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RowChoice {
    pub rows: usize,
    pub gershgorin_bound: Option<f64>,
    /// False when the ladder was exhausted without meeting the threshold.
    pub satisfied: bool,
}

/// Walks `c` up `ladder` and returns the first `M' = min(c M, m)` whose
/// Gershgorin bound is at most `kappa_threshold`, or the last rung.
pub fn adaptive_row_count(
    level: u32,
    sigma: u64,
    nodes: &[usize],
    kappa_threshold: f64,
    ladder: &[usize],
) -> Result<RowChoice> {
    if ladder.first() != Some(&1) || ladder.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("ladder must be ascending and start at 1".into()));
    }
    if level == 0 || level > 62 {
        return Err(Error::InvalidArgument(format!("unsupported level {level}")));
    }
    let modulus = 1usize << level;
    let mut last = None;
    for &c in ladder {
        let rows = (c * nodes.len()).min(modulus);
        if last.map(|l: RowChoice| l.rows) == Some(rows) {
            continue;
        }
        let spec = VandermondeSpec::new(level, sigma, nodes.to_vec(), rows)?;
        let bound = gershgorin_bound(&spec);
        let choice = RowChoice {
            rows,
            gershgorin_bound: bound,
            satisfied: bound.is_some_and(|b| b <= kappa_threshold),
        };
        if choice.satisfied {
            return Ok(choice);
        }
        last = Some(choice);
    }
    Ok(last.expect("ladder is non-empty"))
}
