//! Sequential or data-parallel execution of the brute-force loops.
//!
//! The choice is made at runtime through [`Strategy`] so both paths can be
//! benchmarked side by side. Without the `parallel` feature every strategy
//! runs sequentially. Results never depend on the strategy: all helpers
//! preserve input order.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Strategy {
    Sequential,
    /// Uses the rayon thread pool when the `parallel` feature is enabled.
    #[default]
    Parallel,
}

impl Strategy {
    /// Whether work will actually be spread over threads.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Strategy::Parallel
    }
}

pub(crate) fn filter_map<T, R, F>(strategy: Strategy, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> Option<R> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if strategy.is_parallel() {
        return items.par_iter().filter_map(f).collect();
    }
    let _ = strategy;
    items.iter().filter_map(f).collect()
}

pub(crate) fn map<T, R, F>(strategy: Strategy, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    filter_map(strategy, items, |t| Some(f(t)))
}

/// First item in input order satisfying `pred`.
pub(crate) fn find_first<T, F>(strategy: Strategy, items: &[T], pred: F) -> Option<&T>
where
    T: Sync,
    F: Fn(&T) -> bool + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if strategy.is_parallel() {
        return items.par_iter().find_first(|t| pred(t));
    }
    let _ = strategy;
    items.iter().find(|t| pred(t))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strategies_agree() {
        let items: Vec<u32> = (0..1000).collect();
        let odd = |x: &u32| (x % 2 == 1).then_some(x * 3);
        assert_eq!(
            filter_map(Strategy::Sequential, &items, odd),
            filter_map(Strategy::Parallel, &items, odd)
        );
        let big = |x: &u32| *x > 700 && x.is_multiple_of(7);
        assert_eq!(find_first(Strategy::Parallel, &items, big), Some(&707));
        assert_eq!(find_first(Strategy::Sequential, &items, big), Some(&707));
    }
}
