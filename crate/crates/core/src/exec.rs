//! Execution strategy for the data-parallel loops.
//!
//! With the `parallel` feature (default) the [`Exec::Parallel`] strategy runs
//! on the rayon pool. Without it every strategy falls back to a plain
//! sequential loop; results are identical either way because every reduction
//! used here is associative with a total tie-break order.

/// How a data-parallel loop is executed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

impl Exec {
    /// Whether this build can actually run loops in parallel.
    pub fn parallel_available() -> bool {
        cfg!(feature = "parallel")
    }

    /// Maps every item and folds the results with `reduce`, starting from `identity`.
    pub fn map_reduce<T, R, M, F, I>(self, items: &[T], identity: I, map: M, reduce: F) -> R
    where
        T: Sync,
        R: Send,
        I: Fn() -> R + Sync + Send,
        M: Fn(&T) -> R + Sync + Send,
        F: Fn(R, R) -> R + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => {
                use rayon::prelude::*;
                items.par_iter().map(&map).reduce(&identity, &reduce)
            }
            _ => items.iter().map(map).fold(identity(), reduce),
        }
    }

    /// Order-preserving map.
    pub fn map<T, R, M>(self, items: &[T], map: M) -> Vec<R>
    where
        T: Sync,
        R: Send,
        M: Fn(&T) -> R + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => {
                use rayon::prelude::*;
                items.par_iter().map(map).collect()
            }
            _ => items.iter().map(map).collect(),
        }
    }

    /// Order-preserving map over `0..n`.
    pub fn map_range<R, M>(self, n: usize, map: M) -> Vec<R>
    where
        R: Send,
        M: Fn(usize) -> R + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => {
                use rayon::prelude::*;
                (0..n).into_par_iter().map(map).collect()
            }
            _ => (0..n).map(map).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strategies_agree() {
        let items: Vec<u64> = (1..=1000).collect();
        let a = Exec::Sequential.map_reduce(&items, || 0u64, |x| x * x, |a, b| a + b);
        let b = Exec::Parallel.map_reduce(&items, || 0u64, |x| x * x, |a, b| a + b);
        assert_eq!(a, b);
        assert_eq!(Exec::Parallel.map(&items, |x| x + 1), Exec::Sequential.map(&items, |x| x + 1));
    }
}
