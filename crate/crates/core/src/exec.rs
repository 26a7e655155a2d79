//! Execution seam for data-parallel inner loops.
//!
//! With the `parallel` feature the helpers fan work out over rayon; without
//! it they run plain sequential loops. Both paths produce results in input
//! order, so reports and graphs are byte-identical either way.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// True when this build fans enumerations out over a thread pool.
pub fn parallel_enabled() -> bool {
    cfg!(feature = "parallel")
}

/// Maps `f` over `items`, preserving input order.
#[cfg(feature = "parallel")]
pub fn map_collect<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    items.par_iter().map(f).collect()
}

/// Maps `f` over `items`, preserving input order.
#[cfg(not(feature = "parallel"))]
pub fn map_collect<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}

/// Maps `f` over the integer range `0..n`, preserving order.
#[cfg(feature = "parallel")]
pub fn map_range<U, F>(n: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    (0..n).into_par_iter().map(f).collect()
}

/// Maps `f` over the integer range `0..n`, preserving order.
#[cfg(not(feature = "parallel"))]
pub fn map_range<U, F>(n: usize, f: F) -> Vec<U>
where
    F: Fn(usize) -> U,
{
    (0..n).map(f).collect()
}

/// True iff `f` holds for every item. Short-circuits; the answer does not
/// depend on partitioning.
#[cfg(feature = "parallel")]
pub fn all<T, F>(items: &[T], f: F) -> bool
where
    T: Sync,
    F: Fn(&T) -> bool + Sync + Send,
{
    items.par_iter().all(f)
}

/// True iff `f` holds for every item.
#[cfg(not(feature = "parallel"))]
pub fn all<T, F>(items: &[T], f: F) -> bool
where
    F: Fn(&T) -> bool,
{
    items.iter().all(f)
}
