use rayon::prelude::*;
use semimarkov_core::montecarlo::ChunkExecutor;

/// Runs Monte Carlo chunks on the rayon thread pool. Results come back in
/// chunk order, so estimates match [`semimarkov_core::montecarlo::Sequential`]
/// bit for bit.
#[derive(Debug, Clone, Copy, Default)]
pub struct Rayon;

impl ChunkExecutor for Rayon {
    fn map_chunks<T, F>(&self, chunks: u64, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(u64) -> T + Sync + Send,
    {
        (0..chunks).into_par_iter().map(f).collect()
    }
}
