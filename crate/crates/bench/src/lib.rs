//! Experiment harness for `dsfft`: seeded random instances, error-rate and
//! condition-number sweeps, access-count scaling, and plain-text I/O.

pub mod experiments;
pub mod instance;
pub mod io;


pub use experiments::{
    loglog_slope, run_condition_table, run_error_rate, run_scaling, run_trial, run_trials,
    ConditionRow, ErrorRateRow, ScalingRow, Sweep, TrialRecord,
};
pub use instance::{gen_instance, trial_seed, Instance, InstanceError, VALUE_TOLERANCE};
pub use io::{read_dense, write_csv, write_dense, write_sparse, IoError};
