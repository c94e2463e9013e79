//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature (default) the batch entry points fan out over
//! rayon's global pool; without it they run on the calling thread. The
//! `*_sequential` variants are always available so both paths can be
//! benchmarked side by side.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::error::Result;

/// `f(n)` for every `n` in `from..=to`, in order.
pub fn map_range<T, F>(from: u64, to: u64, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> Result<T> + Send + Sync,
{
    #[cfg(feature = "parallel")]
    {
        if to < from {
            return Ok(Vec::new());
        }
        (from..=to).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        map_range_sequential(from, to, f)
    }
}

pub fn map_range_sequential<T, F>(from: u64, to: u64, f: F) -> Result<Vec<T>>
where
    F: Fn(u64) -> Result<T>,
{
    (from..=to).map(f).collect()
}

/// `f(item)` for every item, in order.
pub fn map_items<I, T, F>(items: &[I], f: F) -> Result<Vec<T>>
where
    I: Sync,
    T: Send,
    F: Fn(&I) -> Result<T> + Send + Sync,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        map_items_sequential(items, f)
    }
}

pub fn map_items_sequential<I, T, F>(items: &[I], f: F) -> Result<Vec<T>>
where
    F: Fn(&I) -> Result<T>,
{
    items.iter().map(f).collect()
}
