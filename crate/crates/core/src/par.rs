//! Data-parallel helpers with a sequential fallback.
//!
//! With the default `parallel` feature the maps run on rayon; without it they
//! run on plain iterators. Callers are responsible for making their
//! reductions order-independent (all reductions in this crate merge results
//! in canonical index order), so results are identical either way and for any
//! worker count.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Map over a slice, in parallel when enabled. Output order matches input.
#[cfg(feature = "parallel")]
pub fn map_slice<T: Sync, U: Send>(items: &[T], f: impl Fn(&T) -> U + Sync + Send) -> Vec<U> {
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_slice<T, U>(items: &[T], f: impl Fn(&T) -> U) -> Vec<U> {
    items.iter().map(f).collect()
}

/// Map over an index range, in parallel when enabled.
#[cfg(feature = "parallel")]
pub fn map_range<U: Send>(n: usize, f: impl Fn(usize) -> U + Sync + Send) -> Vec<U> {
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_range<U>(n: usize, f: impl Fn(usize) -> U) -> Vec<U> {
    (0..n).map(f).collect()
}

/// Run `f` on a dedicated pool of `workers` threads; `workers = 0` uses the
/// global pool (all available parallelism). Without the `parallel` feature
/// the count is ignored and `f` runs on the calling thread.
#[cfg(feature = "parallel")]
pub fn with_workers<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> T {
    if workers == 0 {
        f()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .expect("failed to build worker pool")
            .install(f)
    }
}

#[cfg(not(feature = "parallel"))]
pub fn with_workers<T>(_workers: usize, f: impl FnOnce() -> T) -> T {
    f()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn map_preserves_order() {
        let v: Vec<usize> = map_range(100, |i| i * i);
        assert_eq!(v[3], 9);
        assert_eq!(v[99], 9801);
    }

    #[test]
    fn worker_counts_agree() {
        let a = with_workers(1, || map_range(1000, |i| (i as f64).sqrt()).iter().sum::<f64>());
        let b = with_workers(2, || map_range(1000, |i| (i as f64).sqrt()).iter().sum::<f64>());
        assert_eq!(a, b);
    }
}
