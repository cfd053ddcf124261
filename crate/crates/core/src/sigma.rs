//! Choice of the stretch parameter `sigma` among the largest odd primes
//! below `2^(j-1)`.
//!
//! Each candidate is scored by the two-term neighbourhood of the smallest
//! cyclic gap of the stretched nodes, a cheap proxy for the largest row sum
//! of `1 / |sin|` terms. Scoring is `O(M log M)` per candidate.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::vandermonde::min_periodic_distance;
use crate::{mul_mod, root_of_unity};

/// Relative tolerance under which two scores are treated as tied.
pub const TIE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SigmaScore {
    pub sigma: u64,
    /// Neighbourhood score `D_sigma`; smaller is better.
    pub d_sigma: f64,
    /// `|sum_k w^{sigma n_k}|`, the tie-break; smaller is better.
    pub tie_sum: f64,
}

/// Candidate budget `K = max(1, floor(M / log2 M))`.
pub fn candidate_budget(sparsity: usize) -> usize {
    let m = sparsity.max(2) as f64;
    ((sparsity as f64 / m.log2()).floor() as usize).max(1)
}

fn is_odd_prime(n: u64) -> bool {
    if n < 3 || n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// The `count` largest odd primes strictly below `modulus / 2`, descending.
///
/// Returns `[1]` when no odd prime exists in range.
pub fn candidate_primes(modulus: u64, count: usize) -> Vec<u64> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Vec<u64>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
    let primes = guard.entry(modulus).or_default();

    // Resume the downward scan below the smallest prime found so far.
    let half = modulus / 2;
    let mut next = match primes.last() {
        Some(&p) => p.saturating_sub(2),
        None if half >= 1 => {
            let top = half - 1;
            if top.is_multiple_of(2) { top.saturating_sub(1) } else { top }
        }
        None => 0,
    };
    while primes.len() < count && next >= 3 {
        if is_odd_prime(next) {
            primes.push(next);
        }
        next -= 2;
    }

    let out: Vec<u64> = primes.iter().take(count).cloned().collect();
    if out.is_empty() { vec![1] } else { out }
}

/// Scores one stretch parameter; needs at least two nodes.
pub fn score_sigma(nodes: &[usize], sigma: u64, modulus: u64) -> Result<SigmaScore> {
    if nodes.len() < 2 {
        return Err(Error::InvalidArgument("scoring needs at least two nodes".into()));
    }
    let mut s: Vec<u64> = nodes.iter().map(|&n| mul_mod(sigma, n as u64, modulus)).collect();
    s.sort_unstable();
    let count = s.len();

    // gaps[k] is the gap ending at sorted node k; gaps[0] wraps around.
    let mut gaps = Vec::with_capacity(count);
    gaps.push(s[0] + modulus - s[count - 1]);
    gaps.extend(s.windows(2).map(|w| w[1] - w[0]));
    if gaps.contains(&0) {
        return Err(Error::Degenerate(format!(
            "sigma = {sigma} collides stretched nodes mod {modulus}"
        )));
    }

    let smallest = (0..count).min_by_key(|&k| gaps[k]).unwrap();
    let inv = |gap: u64| 1.0 / (std::f64::consts::PI * gap as f64 / modulus as f64).sin().abs();
    let centre = inv(gaps[smallest]);
    let before = inv(gaps[(smallest + count - 1) % count]);
    let after = inv(gaps[(smallest + 1) % count]);
    let d_sigma = (centre + before).max(centre + after);

    Ok(SigmaScore { sigma, d_sigma, tie_sum: exponential_sum(nodes, sigma, modulus) })
}

fn exponential_sum(nodes: &[usize], sigma: u64, modulus: u64) -> f64 {
    nodes
        .iter()
        .map(|&n| root_of_unity(mul_mod(sigma, n as u64, modulus), modulus))
        .sum::<Complex64>()
        .norm()
}

fn near(a: f64, b: f64) -> bool {
    a == b || (a - b).abs() <= TIE_TOLERANCE * a.abs().max(b.abs())
}

/// Deterministic arg-min: smallest primary key, near-ties broken by the
/// smallest secondary key, remaining ties by the largest `sigma`.
fn pick(scored: &[(u64, f64, f64)]) -> Option<u64> {
    let best = scored.iter().map(|s| s.1).fold(f64::INFINITY, f64::min);
    let tier: Vec<_> = scored.iter().filter(|s| near(s.1, best)).collect();
    let best_tie = tier.iter().map(|s| s.2).fold(f64::INFINITY, f64::min);
    tier.iter().filter(|s| near(s.2, best_tie)).map(|s| s.0).max()
}

/// Picks `sigma` with minimal `D_sigma` among `candidate_primes(modulus, budget)`.
pub fn select_sigma(nodes: &[usize], modulus: u64, budget: usize) -> Result<u64> {
    if nodes.is_empty() {
        return Err(Error::InvalidArgument("node set is empty".into()));
    }
    if nodes.len() == 1 {
        return Ok(1);
    }
    let scored: Vec<_> = candidate_primes(modulus, budget)
        .into_iter()
        .filter_map(|sigma| score_sigma(nodes, sigma, modulus).ok())
        .map(|s| (s.sigma, s.d_sigma, s.tie_sum))
        .collect();
    pick(&scored).ok_or_else(|| Error::Internal("every sigma candidate was degenerate".into()))
}

/// Picks the candidate maximising the minimal periodic distance instead.
pub fn select_sigma_by_distance(nodes: &[usize], modulus: u64, budget: usize) -> Result<u64> {
    if nodes.is_empty() {
        return Err(Error::InvalidArgument("node set is empty".into()));
    }
    if nodes.len() == 1 {
        return Ok(1);
    }
    let scored: Vec<_> = candidate_primes(modulus, budget)
        .into_iter()
        .filter_map(|sigma| {
            let d = min_periodic_distance(nodes, sigma, modulus).ok()?;
            Some((sigma, -(d as f64), exponential_sum(nodes, sigma, modulus)))
        })
        .collect();
    pick(&scored).ok_or_else(|| Error::Internal("every sigma candidate was degenerate".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vandermonde::approx_row_sums;
    use rand::seq::index::sample;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn trial_division(n: u64) -> bool {
        n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
    }

    #[test]
    fn small_candidate_sets() {
        assert_eq!(candidate_primes(16, 2), vec![7, 5]);
        assert_eq!(candidate_primes(8, 5), vec![3]);
        assert_eq!(candidate_primes(4, 3), vec![1]);
        assert_eq!(candidate_primes(2, 1), vec![1]);
        assert_eq!(candidate_primes(64, 20), vec![31, 29, 23, 19, 17, 13, 11, 7, 5, 3]);
    }

    #[test]
    fn large_candidate_set_matches_scan() {
        let want: Vec<u64> = (3..16384u64).rev().filter(|&n| n % 2 == 1 && trial_division(n)).take(3).collect();
        assert_eq!(candidate_primes(1 << 15, 3), want);
        assert_eq!(want, vec![16381, 16369, 16363]);
        // Extending a cached list keeps the prefix.
        let more = candidate_primes(1 << 15, 6);
        assert_eq!(&more[..3], &want[..]);
        assert_eq!(candidate_primes(1 << 15, 2), want[..2].to_vec());
    }

    #[test]
    fn budget() {
        assert_eq!(candidate_budget(1), 1);
        assert_eq!(candidate_budget(2), 2);
        assert_eq!(candidate_budget(20), 4);
        assert_eq!(candidate_budget(100), 15);
    }

    #[test]
    fn antipodal_pair_score() {
        for sigma in [1, 3, 7, 13] {
            let s = score_sigma(&[0, 32], sigma, 64).unwrap();
            assert!((s.d_sigma - 2.0).abs() < 1e-14);
            assert!(s.tie_sum < 1e-14);
        }
    }

    #[test]
    fn hand_evaluated_score() {
        let s = score_sigma(&[0, 1, 2, 3], 3, 8).unwrap();
        let want = 1.0 / (std::f64::consts::PI / 8.0).sin() + 1.0 / (std::f64::consts::PI / 4.0).sin();
        assert!((s.d_sigma - want).abs() < 1e-12);
        assert!((s.d_sigma - 4.0273).abs() < 1e-4);
    }

    #[test]
    fn score_errors() {
        assert!(score_sigma(&[3], 3, 8).is_err());
        assert!(matches!(score_sigma(&[1, 5], 2, 8), Err(Error::Degenerate(_))));
    }

    #[test]
    fn score_never_exceeds_max_row_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..200 {
            let level = rng.random_range(4..13);
            let m = 1u64 << level;
            let count = rng.random_range(3..12);
            let mut nodes = sample(&mut rng, m as usize, count).into_vec();
            nodes.sort_unstable();
            let sigma = 2 * rng.random_range(0..m / 2) + 1;
            let score = score_sigma(&nodes, sigma, m).unwrap();
            let max_sum = approx_row_sums(&nodes, sigma, m).unwrap().into_iter().fold(0.0, f64::max);
            assert!(score.d_sigma <= max_sum * (1.0 + 1e-12));
        }
    }

    #[test]
    fn singleton_and_antipodal_selection() {
        assert_eq!(select_sigma(&[0], 1 << 10, 4).unwrap(), 1);
        assert_eq!(select_sigma(&[7], 2, 4).unwrap(), 1);
        // All odd sigma tie on both keys, so the largest prime wins.
        let pick = select_sigma(&[0, 512], 1024, 5).unwrap();
        assert_eq!(pick, candidate_primes(1024, 5)[0]);
        assert!(select_sigma(&[], 8, 1).is_err());
    }

    #[test]
    fn selection_attains_minimum_score() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let m = 1u64 << 12;
        for _ in 0..50 {
            let mut nodes = sample(&mut rng, m as usize, 8).into_vec();
            nodes.sort_unstable();
            let budget = candidate_budget(8);
            let chosen = select_sigma(&nodes, m, budget).unwrap();
            let scores: Vec<_> = candidate_primes(m, budget).into_iter().map(|s| score_sigma(&nodes, s, m).unwrap()).collect();
            let best = scores.iter().map(|s| s.d_sigma).fold(f64::INFINITY, f64::min);
            let chosen_score = scores.iter().find(|s| s.sigma == chosen).unwrap();
            assert!(chosen_score.d_sigma <= best * (1.0 + TIE_TOLERANCE));
            assert_eq!(chosen % 2, 1);
            // Deterministic.
            assert_eq!(select_sigma(&nodes, m, budget).unwrap(), chosen);
        }
    }

    #[test]
    fn distance_policy_maximises_distance() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let m = 1u64 << 11;
        let mut nodes = sample(&mut rng, m as usize, 10).into_vec();
        nodes.sort_unstable();
        let chosen = select_sigma_by_distance(&nodes, m, 6).unwrap();
        let d = min_periodic_distance(&nodes, chosen, m).unwrap();
        for s in candidate_primes(m, 6) {
            assert!(min_periodic_distance(&nodes, s, m).unwrap() <= d);
        }
    }
}
