//! Data-parallel helpers with a sequential fallback.
//!
//! Identity checks and basis sweeps are embarrassingly parallel and every
//! result is combined order-independently (conjunction, or a sort by key
//! afterwards), so the parallel and sequential paths are bit-identical.
//!
//! The `parallel` cargo feature selects the default; `force_sequential`
//! overrides it at runtime, which is what the benchmarks use to compare the
//! two paths in one binary.

use std::sync::atomic::{AtomicBool, Ordering};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

static FORCE_SEQUENTIAL: AtomicBool = AtomicBool::new(false);

/// Force the sequential path even when the `parallel` feature is enabled.
pub fn force_sequential(on: bool) {
    FORCE_SEQUENTIAL.store(on, Ordering::SeqCst);
}

pub fn is_sequential() -> bool {
    cfg!(not(feature = "parallel")) || FORCE_SEQUENTIAL.load(Ordering::SeqCst)
}

/// Map a function over items, preserving order.
pub fn map<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if !is_sequential() {
            return items.into_par_iter().map(f).collect();
        }
    }
    items.into_iter().map(f).collect()
}

/// First counterexample (by index) for which `f` returns Some, or None when
/// every item passes. Deterministic: the lowest-index witness wins.
pub fn first_failure<T, W, F>(items: &[T], f: F) -> Option<W>
where
    T: Sync,
    W: Send,
    F: Fn(&T) -> Option<W> + Sync,
{
    #[cfg(feature = "parallel")]
    {
        if !is_sequential() {
            return items
                .par_iter()
                .enumerate()
                .filter_map(|(i, t)| f(t).map(|w| (i, w)))
                .min_by_key(|(i, _)| *i)
                .map(|(_, w)| w);
        }
    }
    items.iter().find_map(&f)
}

/// Conjunction over all items.
pub fn all<T, F>(items: &[T], f: F) -> bool
where
    T: Sync,
    F: Fn(&T) -> bool + Sync,
{
    first_failure(items, |t| if f(t) { None } else { Some(()) }).is_none()
}
