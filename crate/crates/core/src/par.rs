//! Index-range helpers that run on rayon when the `parallel` feature is on
//! and fall back to plain iterators otherwise.
//!
//! Every helper returns the same value in both modes: `find_first` yields the
//! match with the smallest index and `map_collect` preserves index order.

use std::ops::Range;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// First `Some` produced by `f` over `range`, in index order.
#[cfg(feature = "parallel")]
pub fn find_first<T, F>(range: Range<usize>, f: F) -> Option<T>
where
    T: Send,
    F: Fn(usize) -> Option<T> + Sync + Send,
{
    range.into_par_iter().find_map_first(f)
}

#[cfg(not(feature = "parallel"))]
pub fn find_first<T, F>(range: Range<usize>, f: F) -> Option<T>
where
    F: Fn(usize) -> Option<T>,
{
    range.into_iter().find_map(f)
}

#[cfg(feature = "parallel")]
pub fn map_collect<T, F>(range: Range<usize>, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    range.into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_collect<T, F>(range: Range<usize>, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    range.into_iter().map(f).collect()
}

#[cfg(feature = "parallel")]
pub fn all<F>(range: Range<usize>, f: F) -> bool
where
    F: Fn(usize) -> bool + Sync + Send,
{
    range.into_par_iter().all(f)
}

#[cfg(not(feature = "parallel"))]
pub fn all<F>(range: Range<usize>, f: F) -> bool
where
    F: Fn(usize) -> bool,
{
    range.into_iter().all(f)
}

/// Same as [`find_first`] over a slice of items.
#[cfg(feature = "parallel")]
pub fn find_first_in<I, T, F>(items: &[I], f: F) -> Option<T>
where
    I: Sync,
    T: Send,
    F: Fn(&I) -> Option<T> + Sync + Send,
{
    items.par_iter().find_map_first(f)
}

#[cfg(not(feature = "parallel"))]
pub fn find_first_in<I, T, F>(items: &[I], f: F) -> Option<T>
where
    F: Fn(&I) -> Option<T>,
{
    items.iter().find_map(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn find_first_returns_lowest_index() {
        let hit = find_first(0..10_000, |i| (i % 97 == 96).then_some(i));
        assert_eq!(hit, Some(96));
        assert_eq!(find_first(0..10, |_| None::<usize>), None);
    }

    #[test]
    fn map_collect_keeps_order() {
        let v = map_collect(0..1000, |i| i * 2);
        assert!(v.iter().enumerate().all(|(i, &x)| x == 2 * i));
    }
}
