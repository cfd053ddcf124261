//! Data-parallel map over independent work items.
//!
//! With the `parallel` feature the [`Execution::Parallel`] strategy runs on
//! the rayon pool; without it every strategy runs sequentially. Results are
//! always returned in index order, so downstream reductions are
//! deterministic regardless of strategy.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if parallel_available() {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

/// Whether the crate was built with the `parallel` feature.
pub const fn parallel_available() -> bool {
    cfg!(feature = "parallel")
}

impl Execution {
    /// `(0..count).map(f)` collected in order.
    pub fn map<T, F>(self, count: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel => {
                use rayon::prelude::*;
                (0..count).into_par_iter().map(f).collect()
            }
            _ => (0..count).map(f).collect(),
        }
    }
}
