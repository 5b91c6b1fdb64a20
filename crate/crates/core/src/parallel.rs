//! Worker-count control for the rayon-backed parallel sections.

/// Runs `f` on a dedicated pool with `workers` threads, or on the global pool
/// when `workers` is `None`.
pub fn with_workers<T, F>(workers: Option<usize>, f: F) -> T
where
    T: Send,
    F: FnOnce() -> T + Send,
{
    match workers {
        None => f(),
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w.max(1))
            .build()
            .expect("thread pool construction")
            .install(f),
    }
}
