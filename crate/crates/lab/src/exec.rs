//! Thread-pool runner for multi-start searches.

use orbitope_core::runner::StartRunner;
use rayon::prelude::*;

/// Environment variable capping the worker count.
pub const THREADS_ENV: &str = "ORBITOPE_LAB_THREADS";

/// Runs starts on a rayon pool. Results come back in start order, so the
/// output does not depend on the number of threads.
pub struct PoolRunner {
    pool: rayon::ThreadPool,
}

impl PoolRunner {
    /// `threads == 0` lets rayon pick.
    pub fn new(threads: usize) -> Result<Self, String> {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().map_err(|e| e.to_string())?;
        Ok(Self { pool })
    }

    pub fn from_env() -> Result<Self, String> {
        let threads = match std::env::var(THREADS_ENV) {
            Ok(v) if !v.trim().is_empty() => v
                .trim()
                .parse::<usize>()
                .map_err(|_| format!("{THREADS_ENV} must be a non-negative integer, got {v:?}"))?,
            _ => 0,
        };
        Self::new(threads)
    }

    pub fn threads(&self) -> usize {
        self.pool.current_num_threads()
    }
}

impl StartRunner for PoolRunner {
    fn run<T, F>(&self, count: usize, job: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        self.pool.install(|| (0..count).into_par_iter().map(job).collect())
    }
}
