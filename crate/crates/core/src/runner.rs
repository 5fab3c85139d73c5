//! Execution of independent multi-start jobs.

use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Runs `count` independent jobs and returns their results in job order.
///
/// Implementations may run jobs concurrently; callers only ever reduce the
/// returned vector, so results do not depend on the executor.
pub trait StartRunner {
    fn run<T, F>(&self, count: usize, job: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send;
}

/// Runs jobs one after another on the calling thread.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl StartRunner for Sequential {
    fn run<T, F>(&self, count: usize, job: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        (0..count).map(job).collect()
    }
}

/// Random stream for one start: the seed picks the key, the start index the
/// stream, so every start is reproducible on its own.
pub fn start_rng(seed: u64, start: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(start as u64);
    rng
}
