use std::sync::OnceLock;

/// Builds the global rayon pool once, honoring BELLSCOPE_THREADS when it
/// is set to a positive integer. All parallel sections collect per-index
/// results and reduce them in a fixed order, so the thread count never
/// changes any output bit.
pub(crate) fn ensure_pool() {
    static INIT: OnceLock<()> = OnceLock::new();
    INIT.get_or_init(|| {
        if let Some(k) = std::env::var("BELLSCOPE_THREADS")
            .ok()
            .and_then(|v| v.parse::<usize>().ok())
            .filter(|&k| k >= 1)
        {
            // fails if a pool already exists, which is fine
            let _ = rayon::ThreadPoolBuilder::new().num_threads(k).build_global();
        }
    });
}
