//! Order-preserving parallel map; sequential when the `parallel` feature is off.

#[cfg(feature = "parallel")]
pub fn map<T: Sync, R: Send, F: Fn(&T) -> R + Sync + Send>(items: &[T], f: F) -> Vec<R> {
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map<T: Sync, R: Send, F: Fn(&T) -> R + Sync + Send>(items: &[T], f: F) -> Vec<R> {
    items.iter().map(f).collect()
}

/// Index-based variant of [`map`] over `0..n`.
#[cfg(feature = "parallel")]
pub fn map_indices<R: Send, F: Fn(u64) -> R + Sync + Send>(n: u64, f: F) -> Vec<R> {
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_indices<R: Send, F: Fn(u64) -> R + Sync + Send>(n: u64, f: F) -> Vec<R> {
    (0..n).map(f).collect()
}
