//! Deterministic data parallelism with an optional thread cap.
//!
//! `QFD_THREADS` limits the worker count. Results are always collected in
//! input order, so output never depends on scheduling.

use std::sync::OnceLock;

use rayon::prelude::*;
use rayon::ThreadPool;

pub const THREADS_ENV: &str = "QFD_THREADS";

fn pool() -> Option<&'static ThreadPool> {
    static POOL: OnceLock<Option<ThreadPool>> = OnceLock::new();
    POOL.get_or_init(|| {
        let n = std::env::var(THREADS_ENV).ok()?.trim().parse::<usize>().ok()?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .ok()
    })
    .as_ref()
}

/// Worker count that [`map_ordered`] will use.
pub fn thread_count() -> usize {
    match pool() {
        Some(p) => p.current_num_threads(),
        None => rayon::current_num_threads(),
    }
}

/// Applies `f` to every item in parallel and returns results in input order.
pub fn map_ordered<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    let run = || items.par_iter().map(&f).collect();
    match pool() {
        Some(p) => p.install(run),
        None => run(),
    }
}
