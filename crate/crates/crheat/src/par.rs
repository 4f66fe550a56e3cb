//! Deterministic parallel map over fixed path chunks.
//!
//! Work is split into chunks whose boundaries depend only on the problem
//! size, never on the number of workers, and results come back in chunk
//! order. Callers reduce them sequentially, so sums are bit-identical for any
//! thread count.

use std::ops::Range;

/// Paths per work unit.
pub const CHUNK: u64 = 2048;

/// Apply `f` to consecutive ranges covering `0..total` and return the
/// results in range order.
pub fn map_chunks<T, F>(total: u64, chunk: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(Range<u64>) -> T + Sync + Send,
{
    let chunk = chunk.max(1);
    let count = total.div_ceil(chunk);
    let range = move |c: u64| c * chunk..((c + 1) * chunk).min(total);
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..count).into_par_iter().map(|c| f(range(c))).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..count).map(|c| f(range(c))).collect()
    }
}

/// Run `f` on a pool of `threads` workers (0 = library default).
pub fn with_threads<R: Send>(threads: usize, f: impl FnOnce() -> R + Send) -> R {
    #[cfg(feature = "parallel")]
    {
        if threads > 0 {
            if let Ok(pool) = rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
                return pool.install(f);
            }
        }
        f()
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = threads;
        f()
    }
}
