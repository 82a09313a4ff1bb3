//! Sequential or data-parallel evaluation of independent instances.
//!
//! Every checker in this crate maps a pure function over an index range and
//! collects the results in index order, so reports are identical whichever
//! strategy runs them. With the `parallel` feature disabled, [`Exec::Parallel`]
//! runs sequentially.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

impl Exec {
    /// `f(0), f(1), ..., f(n - 1)` in index order.
    pub fn map_range<R, F>(self, n: usize, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(usize) -> R + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => (0..n).into_par_iter().map(f).collect(),
            _ => (0..n).map(f).collect(),
        }
    }

    pub fn map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        self.map_range(items.len(), |i| f(&items[i]))
    }

    /// Concatenation of `f(i)` over the index range, in index order.
    pub fn flat_map_range<R, F>(self, n: usize, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(usize) -> Vec<R> + Sync + Send,
    {
        self.map_range(n, f).into_iter().flatten().collect()
    }

    /// Sum of `f(i)` over the index range.
    pub fn sum_range<F>(self, n: usize, f: F) -> usize
    where
        F: Fn(usize) -> usize + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => (0..n).into_par_iter().map(f).sum(),
            _ => (0..n).map(f).sum(),
        }
    }
}
