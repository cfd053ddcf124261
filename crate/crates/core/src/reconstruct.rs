//! Level-by-level recovery of a sparse vector from its spectrum.
//!
//! Starting from `x^(0) = x_hat_0`, each level computes `x^(j+1)` from
//! `x^(j)` and the odd-indexed samples of `x_hat^(j+1)`. While
//! `M_j^2 >= 2^j` a length-`2^j` inverse FFT is cheaper; afterwards only the
//! `M_j` unknowns on the current support are solved for through a
//! rectangular Vandermonde system with `M'_j` rows.

use num_complex::Complex64;

use crate::config::{Config, RowPolicy, SigmaPolicy};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::fft::ifft;
use crate::oracle::{SpectrumOracle, SpectrumSource};
use crate::rows::{adaptive_row_count, simple_row_count};
use crate::sigma::{candidate_budget, select_sigma, select_sigma_by_distance};
use crate::signal::expand;
use crate::vandermonde::{
    condition_report, min_periodic_distance, solve_restricted_system, ConditionReport,
    VandermondeSpec,
};
use crate::{mul_mod, root_of_unity};

/// `(sigma, M')` used at a sparse level, kept for the doubling shortcut.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CachedParameters {
    pub level: u32,
    pub sparsity: usize,
    pub sigma: u64,
    pub rows: usize,
}

/// Support and values of `x^(j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelState {
    pub level: u32,
    pub support: Vec<usize>,
    pub values: Vec<Complex64>,
    pub cached: Option<CachedParameters>,
}

impl LevelState {
    pub fn sparsity(&self) -> usize {
        self.support.len()
    }

    /// Dense `x^(j)` of length `2^j`.
    pub fn to_dense(&self) -> Vec<Complex64> {
        expand(&self.support, &self.values, 1 << self.level)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// Warm start: `x^(j0)` by a dense inverse FFT.
    WarmStart,
    Dense,
    Sparse,
    /// Sparse level abandoned after an ill-conditioned retry.
    DenseFallback,
}

/// Diagnostics for the transition from level `j` to `j + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelRecord {
    pub level: u32,
    /// `M_j` entering the level.
    pub sparsity: usize,
    pub branch: Branch,
    /// Vandermonde factor of the final solve on sparse levels.
    pub spec: Option<VandermondeSpec>,
    /// True when `(sigma, M')` came from the doubling shortcut.
    pub reused: bool,
    pub condition: Option<ConditionReport>,
    pub residual: Option<f64>,
    pub fetches: u64,
    pub warnings: Vec<String>,
}

impl LevelRecord {
    fn new(level: u32, sparsity: usize, branch: Branch) -> Self {
        Self {
            level,
            sparsity,
            branch,
            spec: None,
            reused: false,
            condition: None,
            residual: None,
            fetches: 0,
            warnings: Vec::new(),
        }
    }

    pub fn sigma(&self) -> Option<u64> {
        self.spec.as_ref().map(VandermondeSpec::sigma)
    }

    pub fn rows(&self) -> Option<usize> {
        self.spec.as_ref().map(VandermondeSpec::rows)
    }

    pub fn condition_bound(&self) -> Option<f64> {
        self.condition.and_then(|c| c.gershgorin_bound)
    }
}

/// Recovered support and values of `x` plus per-level diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseResult {
    pub len: usize,
    pub support: Vec<usize>,
    pub values: Vec<Complex64>,
    pub accesses: u64,
    pub levels: Vec<LevelRecord>,
}

impl SparseResult {
    pub fn sparsity(&self) -> usize {
        self.support.len()
    }

    pub fn to_dense(&self) -> Vec<Complex64> {
        expand(&self.support, &self.values, self.len)
    }

    pub fn sparse_levels(&self) -> impl Iterator<Item = &LevelRecord> {
        self.levels.iter().filter(|r| r.branch == Branch::Sparse)
    }
}

/// `(sigma, M')` for one sparse level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParameterChoice {
    pub sigma: u64,
    pub rows: usize,
    pub reused: bool,
    /// Set when the adaptive ladder ran out before meeting the threshold.
    pub ladder_exhausted: bool,
}

/// Reads `x_hat_0`; `None` means the significant part of `x` is empty.
pub fn init_state<S: SpectrumSource>(
    oracle: &SpectrumOracle<S>,
    epsilon: f64,
) -> Result<Option<LevelState>> {
    let dc = oracle.fetch(0)?;
    if dc.norm() < epsilon {
        return Ok(None);
    }
    Ok(Some(LevelState { level: 0, support: vec![0], values: vec![dc], cached: None }))
}

fn check_level<S: SpectrumSource>(state: &LevelState, oracle: &SpectrumOracle<S>) -> Result<()> {
    if state.level >= oracle.log2_len() {
        return Err(Error::LevelOutOfRange { level: state.level, max: oracle.log2_len() - 1 });
    }
    Ok(())
}

/// Keeps the candidates `I ∪ (I + 2^j)` whose value has modulus at least `epsilon`.
fn split_and_prune(
    level: u32,
    support: &[usize],
    prev: &[Complex64],
    lower: &[Complex64],
    epsilon: f64,
) -> (Vec<usize>, Vec<Complex64>) {
    let half = 1usize << level;
    let mut next_support = Vec::with_capacity(2 * support.len());
    let mut next_values = Vec::with_capacity(2 * support.len());
    for (&n, &x0) in support.iter().zip(lower) {
        if x0.norm() >= epsilon {
            next_support.push(n);
            next_values.push(x0);
        }
    }
    for ((&n, &x0), &x) in support.iter().zip(lower).zip(prev) {
        let x1 = x - x0;
        if x1.norm() >= epsilon {
            next_support.push(n + half);
            next_values.push(x1);
        }
    }
    (next_support, next_values)
}

/// One level through a length-`2^j` inverse FFT of the odd samples.
pub fn dense_level_step<S: SpectrumSource>(
    state: &LevelState,
    oracle: &SpectrumOracle<S>,
    epsilon: f64,
) -> Result<(LevelState, LevelRecord)> {
    check_level(state, oracle)?;
    let level = state.level;
    let half = 1usize << level;
    let mut record = LevelRecord::new(level, state.sparsity(), Branch::Dense);

    let z = (0..half).map(|p| oracle.fetch_odd(level, p)).collect::<Result<Vec<_>>>()?;
    record.fetches = half as u64;
    let w = ifft(&z)?;

    // Every index of the level is evaluated, so entries hidden by a
    // cancellation in x^(j) reappear here.
    let dense_prev = state.to_dense();
    let twice = 2 * half as u64;
    let lower: Vec<Complex64> = (0..half)
        .map(|n| 0.5 * (root_of_unity(n as u64, twice).conj() * w[n] + dense_prev[n]))
        .collect();
    let all: Vec<usize> = (0..half).collect();

    let (support, values) = split_and_prune(level, &all, &dense_prev, &lower, epsilon);
    let next = LevelState { level: level + 1, support, values, cached: None };
    Ok((next, record))
}

/// Picks `(sigma, M')`, reusing `(2 sigma, M')` from the previous level when
/// the sparsity did not change there.
pub fn choose_parameters(state: &LevelState, config: &Config) -> Result<ParameterChoice> {
    let level = state.level;
    if level == 0 {
        return Err(Error::InvalidArgument("sparse levels start at j = 1".into()));
    }
    let modulus = 1u64 << level;
    let nodes = &state.support;
    if nodes.is_empty() {
        return Err(Error::InvalidArgument("empty support".into()));
    }

    if let Some(cached) = state.cached {
        if cached.level + 1 == level && cached.sparsity == nodes.len() {
            let sigma = (2 * cached.sigma) % modulus;
            if sigma != 0 && min_periodic_distance(nodes, sigma, modulus).is_ok() {
                return Ok(ParameterChoice {
                    sigma,
                    rows: cached.rows.min(modulus as usize),
                    reused: true,
                    ladder_exhausted: false,
                });
            }
        }
    }

    let budget = candidate_budget(nodes.len());
    let sigma = match config.sigma_policy {
        SigmaPolicy::NeighbourScore => select_sigma(nodes, modulus, budget)?,
        SigmaPolicy::DistanceOnly => select_sigma_by_distance(nodes, modulus, budget)?,
    };
    let (rows, ladder_exhausted) = match config.row_policy {
        RowPolicy::SimpleBound => {
            let d = min_periodic_distance(nodes, sigma, modulus)?;
            (simple_row_count(nodes.len(), d, modulus, config.c_max), false)
        }
        RowPolicy::GershgorinAdaptive => {
            let choice = adaptive_row_count(level, sigma, nodes, config.kappa_threshold, &config.c_ladder)?;
            (choice.rows, !choice.satisfied)
        }
    };
    Ok(ParameterChoice { sigma, rows, reused: false, ladder_exhausted })
}

/// Row `p` of the sampled grid: `h_p = sigma p mod 2^j`.
fn row_index(sigma: u64, p: usize, modulus: u64) -> usize {
    mul_mod(sigma, p as u64, modulus) as usize
}

/// One level through the restricted Vandermonde system.
///
/// An ill-conditioned solve is retried once with `M'` doubled (capped at
/// `2^j`); if that also fails the level is redone densely.
pub fn sparse_level_step<S: SpectrumSource>(
    state: &LevelState,
    oracle: &SpectrumOracle<S>,
    config: &Config,
) -> Result<(LevelState, LevelRecord)> {
    check_level(state, oracle)?;
    let level = state.level;
    let modulus = 1u64 << level;
    let choice = choose_parameters(state, config)?;

    let mut record = LevelRecord::new(level, state.sparsity(), Branch::Sparse);
    record.reused = choice.reused;
    if choice.ladder_exhausted {
        record.warnings.push(format!(
            "row ladder exhausted at M' = {} without reaching kappa <= {}",
            choice.rows, config.kappa_threshold
        ));
    }

    let mut spec = VandermondeSpec::new(level, choice.sigma, state.support.clone(), choice.rows)?;
    let mut rhs = Vec::with_capacity(spec.rows());
    for p in 0..spec.rows() {
        rhs.push(oracle.fetch_odd(level, row_index(spec.sigma(), p, modulus))?);
    }
    record.fetches = rhs.len() as u64;

    let mut solved = solve_restricted_system(&spec, &state.values, &rhs);
    if let Err(Error::IllConditioned { ratio }) = solved {
        let wider = (2 * spec.rows()).min(modulus as usize);
        record.warnings.push(format!("ill-conditioned solve (ratio {ratio:e}) at M' = {}", spec.rows()));
        if wider > spec.rows() {
            spec = spec.with_rows(wider)?;
            for p in rhs.len()..wider {
                rhs.push(oracle.fetch_odd(level, row_index(spec.sigma(), p, modulus))?);
            }
            record.fetches = rhs.len() as u64;
            solved = solve_restricted_system(&spec, &state.values, &rhs);
        }
    }

    let solution = match solved {
        Ok(solution) => solution,
        Err(Error::IllConditioned { ratio }) => {
            let (next, dense) = dense_level_step(state, oracle, config.epsilon)?;
            let mut fallback = record;
            fallback.branch = Branch::DenseFallback;
            fallback.warnings.push(format!("fell back to dense level after ratio {ratio:e}"));
            fallback.fetches += dense.fetches;
            fallback.spec = Some(spec);
            return Ok((next, fallback));
        }
        Err(e) => return Err(e),
    };

    let (support, values) =
        split_and_prune(level, &state.support, &state.values, &solution.lower, config.epsilon);
    record.condition = Some(condition_report(&spec));
    record.residual = Some(solution.residual);
    let cached = CachedParameters {
        level,
        sparsity: state.sparsity(),
        sigma: spec.sigma(),
        rows: spec.rows(),
    };
    record.spec = Some(spec);
    let next = LevelState { level: level + 1, support, values, cached: Some(cached) };
    Ok((next, record))
}

fn finish<S: SpectrumSource>(
    oracle: &SpectrumOracle<S>,
    state: Option<LevelState>,
    levels: Vec<LevelRecord>,
) -> SparseResult {
    let (support, values) = match state {
        Some(s) if s.level == oracle.log2_len() => (s.support, s.values),
        _ => (Vec::new(), Vec::new()),
    };
    SparseResult { len: oracle.len(), support, values, accesses: oracle.accesses(), levels }
}

/// Recovers `x` from its spectrum without knowing the sparsity.
pub fn run_sparse_ifft<S: SpectrumSource>(
    oracle: &SpectrumOracle<S>,
    config: &Config,
) -> Result<SparseResult> {
    config.validate()?;
    let Some(mut state) = init_state(oracle, config.epsilon)? else {
        return Ok(finish(oracle, None, Vec::new()));
    };
    let mut levels = Vec::with_capacity(oracle.log2_len() as usize);
    while state.level < oracle.log2_len() {
        if state.support.is_empty() {
            return Ok(finish(oracle, None, levels));
        }
        let m = state.sparsity() as u128;
        let (next, record) = if m * m >= 1u128 << state.level {
            dense_level_step(&state, oracle, config.epsilon)?
        } else {
            sparse_level_step(&state, oracle, config)?
        };
        levels.push(record);
        state = next;
    }
    Ok(finish(oracle, Some(state), levels))
}

/// Recovers `x` when its sparsity `M` (with `M^2 < N`) is known: starts at
/// `j0 = floor(log2 M) + 1` with one dense inverse FFT, continues densely
/// while fewer than `M` entries are visible, then sparsely.
pub fn run_known_sparsity<S: SpectrumSource>(
    oracle: &SpectrumOracle<S>,
    sparsity: usize,
    config: &Config,
) -> Result<SparseResult> {
    config.validate()?;
    if sparsity == 0 || (sparsity as u128).pow(2) >= oracle.len() as u128 {
        return Err(Error::InvalidArgument(format!(
            "known sparsity {sparsity} requires 1 <= M and M^2 < N = {}",
            oracle.len()
        )));
    }
    let start = sparsity.ilog2() + 1;
    let width = 1usize << start;
    let samples = (0..width)
        .map(|k| oracle.subsample_spectrum(start, k))
        .collect::<Result<Vec<_>>>()?;
    let periodized = ifft(&samples)?;
    let (support, values): (Vec<usize>, Vec<Complex64>) = periodized
        .into_iter()
        .enumerate()
        .filter(|(_, v)| v.norm() >= config.epsilon)
        .unzip();

    let mut record = LevelRecord::new(start, support.len(), Branch::WarmStart);
    record.fetches = width as u64;
    if support.len() < sparsity {
        record.warnings.push(format!(
            "only {} of {sparsity} entries visible at level {start}; continuing densely",
            support.len()
        ));
    }
    let mut levels = vec![record];
    let mut state = LevelState { level: start, support, values, cached: None };

    // Fewer than M visible entries (possibly none) keep the loop dense.
    while state.level < oracle.log2_len() {
        let (next, record) = if state.sparsity() < sparsity {
            dense_level_step(&state, oracle, config.epsilon)?
        } else {
            sparse_level_step(&state, oracle, config)?
        };
        levels.push(record);
        state = next;
    }
    Ok(finish(oracle, Some(state), levels))
}

/// Dispatches on `config.known_sparsity`.
pub fn reconstruct<S: SpectrumSource>(
    oracle: &SpectrumOracle<S>,
    config: &Config,
) -> Result<SparseResult> {
    match config.known_sparsity {
        Some(m) => run_known_sparsity(oracle, m, config),
        None => run_sparse_ifft(oracle, config),
    }
}

/// Independent reconstructions over many oracles, returned in input order.
pub fn reconstruct_batch<S>(
    oracles: &[SpectrumOracle<S>],
    config: &Config,
    execution: Execution,
) -> Vec<Result<SparseResult>>
where
    S: SpectrumSource + Sync,
{
    execution.map(oracles.len(), |i| reconstruct(&oracles[i], config))
}
