//! Phase-parallel execution on rayon.

use rayon::prelude::*;
use rayon::{ThreadPool, ThreadPoolBuildError, ThreadPoolBuilder};
use resot_core::PhaseExecutor;

/// Runs the nodes of a phase as rayon tasks. Results are collected in node
/// order, so traces match the sequential schedule exactly.
#[derive(Debug, Default)]
pub struct RayonExecutor {
    pool: Option<ThreadPool>,
}

impl RayonExecutor {
    /// Uses rayon's global pool.
    pub fn global() -> Self {
        Self { pool: None }
    }

    /// A dedicated pool; `0` lets rayon pick the thread count.
    pub fn with_threads(threads: usize) -> Result<Self, ThreadPoolBuildError> {
        let pool = ThreadPoolBuilder::new().num_threads(threads).build()?;
        Ok(Self { pool: Some(pool) })
    }
}

impl PhaseExecutor for RayonExecutor {
    fn map_nodes(&self, n: usize, f: &(dyn Fn(usize) -> Vec<f64> + Sync)) -> Vec<Vec<f64>> {
        let work = || (0..n).into_par_iter().map(f).collect();
        match &self.pool {
            Some(pool) => pool.install(work),
            None => work(),
        }
    }
}
