//! Sweeps over seeded instances. Trials are independent and run through
//! [`Execution`]; every aggregate is reduced sequentially in trial order so
//! results do not depend on the execution strategy.

use std::time::{Duration, Instant};

use dsfft::vandermonde::spectral_condition;
use dsfft::{run_sparse_ifft, Config, Execution};
use serde::Serialize;

use crate::instance::{gen_instance, trial_seed, InstanceError};

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub config: Config,
    pub trials: usize,
    pub seed: u64,
    pub execution: Execution,
}

impl Sweep {
    pub fn new(config: Config, trials: usize, seed: u64) -> Self {
        Self { config, trials, seed, execution: Execution::default() }
    }

    pub fn with_execution(mut self, execution: Execution) -> Self {
        self.execution = execution;
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub log2_len: u32,
    pub sparsity: usize,
    pub c_max: usize,
    pub seed: u64,
    pub success: bool,
    pub max_relative_error: Option<f64>,
    /// Mean true `kappa_2` over the sparse levels, when measured and any exist.
    pub mean_condition: Option<f64>,
    /// Mean Gershgorin bound over the sparse levels where it applies.
    pub mean_gershgorin: Option<f64>,
    pub sparse_levels: usize,
    pub accesses: u64,
    pub elapsed: Duration,
}

fn mean(values: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, count) = values.fold((0.0, 0usize), |(s, c), v| (s + v, c + 1));
    (count > 0).then(|| sum / count as f64)
}

/// One instance through `run_sparse_ifft`; with `measure_condition` every
/// sparse-level Vandermonde matrix is also built and its `kappa_2` taken
/// from the SVD.
pub fn run_trial(
    log2_len: u32,
    sparsity: usize,
    seed: u64,
    config: &Config,
    measure_condition: bool,
) -> Result<TrialRecord, InstanceError> {
    let instance = gen_instance(log2_len, sparsity, seed)?;
    let oracle = instance.oracle();
    let start = Instant::now();
    let result = run_sparse_ifft(&oracle, config);
    let elapsed = start.elapsed();

    let record = match result {
        Ok(result) => {
            let specs: Vec<_> = result.sparse_levels().filter_map(|r| r.spec.as_ref()).collect();
            let mean_condition = if measure_condition {
                mean(specs.iter().map(|s| spectral_condition(s)))
            } else {
                None
            };
            let max_relative_error = instance.max_relative_error(&result);
            TrialRecord {
                log2_len,
                sparsity,
                c_max: config.c_max,
                seed,
                success: instance.is_recovered(&result),
                max_relative_error,
                mean_condition,
                mean_gershgorin: mean(result.sparse_levels().filter_map(|r| r.condition_bound())),
                sparse_levels: specs.len(),
                accesses: result.accesses,
                elapsed,
            }
        }
        // A reconstruction error counts as a failed trial.
        Err(_) => TrialRecord {
            log2_len,
            sparsity,
            c_max: config.c_max,
            seed,
            success: false,
            max_relative_error: None,
            mean_condition: None,
            mean_gershgorin: None,
            sparse_levels: 0,
            accesses: oracle.accesses(),
            elapsed,
        },
    };
    Ok(record)
}

/// `sweep.trials` instances at `(J, M)` with seeds `trial_seed(sweep.seed, t)`.
pub fn run_trials(
    log2_len: u32,
    sparsity: usize,
    sweep: &Sweep,
    measure_condition: bool,
) -> Result<Vec<TrialRecord>, InstanceError> {
    gen_instance(log2_len, sparsity, sweep.seed)?;
    sweep
        .execution
        .map(sweep.trials, |t| {
            run_trial(log2_len, sparsity, trial_seed(sweep.seed, t), &sweep.config, measure_condition)
        })
        .into_iter()
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorRateRow {
    #[serde(rename = "M")]
    pub m: usize,
    pub failures: usize,
    pub trials: usize,
    pub rate_percent: f64,
}

pub fn run_error_rate(
    log2_len: u32,
    sparsities: &[usize],
    sweep: &Sweep,
) -> Result<Vec<ErrorRateRow>, InstanceError> {
    sparsities
        .iter()
        .map(|&m| {
            let records = run_trials(log2_len, m, sweep, false)?;
            let failures = records.iter().filter(|r| !r.success).count();
            let trials = records.len();
            let rate_percent = if trials == 0 { 0.0 } else { 100.0 * failures as f64 / trials as f64 };
            Ok(ErrorRateRow { m, failures, trials, rate_percent })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionRow {
    #[serde(rename = "J")]
    pub j: u32,
    #[serde(rename = "M")]
    pub m: usize,
    pub c_max: usize,
    /// Mean over trials of the per-run average true `kappa_2`.
    pub mean_kappa: Option<f64>,
    pub mean_gershgorin: Option<f64>,
    /// Trials that had at least one sparse level.
    pub runs: usize,
}

/// Condition-number table: for each `(J, M)`, the mean over trials of each
/// run's average `kappa_2` across the Vandermonde matrices it used.
pub fn run_condition_table(
    log2_lens: &[u32],
    sparsities: &[usize],
    sweep: &Sweep,
) -> Result<Vec<ConditionRow>, InstanceError> {
    let mut rows = Vec::new();
    for &j in log2_lens {
        for &m in sparsities {
            let records = run_trials(j, m, sweep, true)?;
            rows.push(ConditionRow {
                j,
                m,
                c_max: sweep.config.c_max,
                mean_kappa: mean(records.iter().filter_map(|r| r.mean_condition)),
                mean_gershgorin: mean(records.iter().filter_map(|r| r.mean_gershgorin)),
                runs: records.iter().filter(|r| r.mean_condition.is_some()).count(),
            });
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingRow {
    #[serde(rename = "J")]
    pub j: u32,
    #[serde(rename = "M")]
    pub m: usize,
    pub c_max: usize,
    pub mean_accesses: f64,
    pub max_accesses: u64,
    /// `2^(ceil(2 log2 M) + 1) + c_max M J + 1`.
    pub access_bound: u64,
    pub mean_elapsed_s: f64,
    pub failures: usize,
}

/// Oracle-access bound for unknown-sparsity runs.
pub fn access_bound(log2_len: u32, sparsity: usize, c_max: usize) -> u64 {
    let dense_exp = (2.0 * (sparsity.max(1) as f64).log2()).ceil() as u32 + 1;
    (1u64 << dense_exp) + (c_max * sparsity) as u64 * log2_len as u64 + 1
}

pub fn run_scaling(
    log2_lens: &[u32],
    sparsities: &[usize],
    sweep: &Sweep,
) -> Result<Vec<ScalingRow>, InstanceError> {
    let mut rows = Vec::new();
    for &m in sparsities {
        for &j in log2_lens {
            let records = run_trials(j, m, sweep, false)?;
            let n = records.len().max(1) as f64;
            rows.push(ScalingRow {
                j,
                m,
                c_max: sweep.config.c_max,
                mean_accesses: records.iter().map(|r| r.accesses as f64).sum::<f64>() / n,
                max_accesses: records.iter().map(|r| r.accesses).max().unwrap_or(0),
                access_bound: access_bound(j, m, sweep.config.c_max),
                mean_elapsed_s: records.iter().map(|r| r.elapsed.as_secs_f64()).sum::<f64>() / n,
                failures: records.iter().filter(|r| !r.success).count(),
            });
        }
    }
    Ok(rows)
}

/// Least-squares slope of `log y` against `log x`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let points: Vec<(f64, f64)> = xs
        .iter()
        .zip(ys)
        .filter(|(x, y)| **x > 0.0 && **y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_power_law() {
        let xs: Vec<f64> = (1..10).map(|k| (1u64 << k) as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 * x.powf(0.5)).collect();
        assert!((loglog_slope(&xs, &ys).unwrap() - 0.5).abs() < 1e-12);
        assert_eq!(loglog_slope(&[1.0], &[1.0]), None);
    }

    #[test]
    fn bound_formula() {
        // M = 10: ceil(2 log2 10) + 1 = 8.
        assert_eq!(access_bound(12, 10, 2), 256 + 240 + 1);
        assert_eq!(access_bound(15, 20, 2), 1024 + 600 + 1);
        assert_eq!(access_bound(15, 16, 2), 512 + 480 + 1);
    }

    #[test]
    fn strategies_give_identical_rows() {
        let config = Config::default();
        let seq = Sweep::new(config.clone(), 8, 5).with_execution(Execution::Sequential);
        let par = Sweep::new(config, 8, 5).with_execution(Execution::Parallel);
        assert_eq!(run_error_rate(12, &[5, 9], &seq).unwrap(), run_error_rate(12, &[5, 9], &par).unwrap());
        let a = run_condition_table(&[12], &[9], &seq).unwrap();
        let b = run_condition_table(&[12], &[9], &par).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn small_error_rate_sweep_succeeds() {
        let rows = run_error_rate(12, &[4, 16], &Sweep::new(Config::default(), 10, 1)).unwrap();
        assert!(rows.iter().all(|r| r.failures == 0 && r.trials == 10));
    }
}
