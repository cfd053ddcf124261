use crate::error::{Error, Result};

/// How the Vandermonde row count `M'` is chosen at a freshly parameterized level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RowPolicy {
    /// `M' = c M` with `c = min(floor(2^j / (M d)), c_max)`.
    #[default]
    SimpleBound,
    /// Walk the ladder `c in {1, 2, 5}` until the Gershgorin bound is below
    /// `kappa_threshold`.
    GershgorinAdaptive,
}

/// How the stretch parameter `sigma` is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SigmaPolicy {
    /// Two-term neighbourhood score around the smallest stretched gap.
    #[default]
    NeighbourScore,
    /// Maximise the minimal periodic distance only.
    DistanceOnly,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    /// Shrinkage threshold: entries with modulus below it are dropped.
    pub epsilon: f64,
    pub c_max: usize,
    pub row_policy: RowPolicy,
    pub sigma_policy: SigmaPolicy,
    /// Acceptable Gershgorin condition bound for [`RowPolicy::GershgorinAdaptive`].
    pub kappa_threshold: f64,
    pub c_ladder: Vec<usize>,
    /// Enables the warm start of [`crate::run_known_sparsity`] when set.
    pub known_sparsity: Option<usize>,
    /// Seed for instance generation in the bench harness; unused by the algorithm.
    pub rng_seed: u64,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            epsilon: 1e-8,
            c_max: 2,
            row_policy: RowPolicy::SimpleBound,
            sigma_policy: SigmaPolicy::NeighbourScore,
            kappa_threshold: 10.0,
            c_ladder: vec![1, 2, 5],
            known_sparsity: None,
            rng_seed: 0,
        }
    }
}

impl Config {
    pub fn with_c_max(mut self, c_max: usize) -> Self {
        self.c_max = c_max;
        self
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon;
        self
    }

    pub fn with_row_policy(mut self, policy: RowPolicy) -> Self {
        self.row_policy = policy;
        self
    }

    pub fn with_sigma_policy(mut self, policy: SigmaPolicy) -> Self {
        self.sigma_policy = policy;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "epsilon must be positive and finite, got {}",
                self.epsilon
            )));
        }
        if self.c_max < 1 {
            return Err(Error::InvalidArgument("c_max must be at least 1".into()));
        }
        if self.kappa_threshold.is_nan() || self.kappa_threshold <= 1.0 {
            return Err(Error::InvalidArgument(format!(
                "kappa_threshold must exceed 1, got {}",
                self.kappa_threshold
            )));
        }
        if self.c_ladder.first() != Some(&1) || self.c_ladder.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument(
                "c_ladder must be strictly ascending and start at 1".into(),
            ));
        }
        if self.known_sparsity == Some(0) {
            return Err(Error::InvalidArgument("known_sparsity must be positive".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        let config = Config::default();
        config.validate().unwrap();
        assert_eq!(config.c_max, 2);
        assert_eq!(config.epsilon, 1e-8);
        assert_eq!(config.row_policy, RowPolicy::SimpleBound);
    }

    #[test]
    fn rejects_bad_values() {
        assert!(Config::default().with_epsilon(0.0).validate().is_err());
        assert!(Config::default().with_epsilon(f64::NAN).validate().is_err());
        assert!(Config::default().with_c_max(0).validate().is_err());
        let c = Config { kappa_threshold: 1.0, ..Config::default() };
        assert!(c.validate().is_err());
        let c = Config { c_ladder: vec![2, 5], ..Config::default() };
        assert!(c.validate().is_err());
    }
}
