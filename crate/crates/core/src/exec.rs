//! Data-parallel helpers with a sequential fallback.
//!
//! Every exhaustive check in the crate is phrased as "scan the index range
//! `0..n` and stop at the first hit" or "map the range and concatenate", so
//! the two strategies below produce identical results. Parallel scans use
//! `find_map_first`, which keeps the least-index witness.

/// How an exhaustive kernel is executed.
///
/// `Parallel` requires the `parallel` feature; without it the variant is
/// still accepted but runs sequentially.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

impl Execution {
    /// Least `i` in `0..n` for which `f` returns `Some`.
    pub fn find_first<T, F>(self, n: usize, f: F) -> Option<T>
    where
        T: Send,
        F: Fn(usize) -> Option<T> + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel => {
                use rayon::prelude::*;
                (0..n).into_par_iter().find_map_first(f)
            }
            _ => (0..n).find_map(f),
        }
    }

    /// `f` applied to every index, results kept in index order.
    pub fn map<T, F>(self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel => {
                use rayon::prelude::*;
                (0..n).into_par_iter().map(f).collect()
            }
            _ => (0..n).map(f).collect(),
        }
    }

    /// Concatenation of `f(0), f(1), ..` in index order.
    pub fn flat_map<T, F>(self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> Vec<T> + Sync + Send,
    {
        self.map(n, f).into_iter().flatten().collect()
    }

    pub fn all<F>(self, n: usize, f: F) -> bool
    where
        F: Fn(usize) -> bool + Sync + Send,
    {
        self.find_first(n, |i| (!f(i)).then_some(())).is_none()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strategies_agree_on_first_witness() {
        let hit = |i: usize| (i % 37 == 36 || i == 500).then_some(i);
        assert_eq!(Execution::Sequential.find_first(1000, hit), Some(36));
        assert_eq!(Execution::Parallel.find_first(1000, hit), Some(36));
        assert_eq!(Execution::Parallel.find_first(10, hit), None);
    }

    #[test]
    fn map_keeps_order() {
        let v = Execution::Parallel.flat_map(50, |i| vec![i; i % 3]);
        let w = Execution::Sequential.flat_map(50, |i| vec![i; i % 3]);
        assert_eq!(v, w);
    }
}
