#[cfg(feature = "parallel")]
pub use rayon::prelude::*;

#[cfg(not(feature = "parallel"))]
mod sequential {
    /// Sequential stand-in for `rayon::prelude::IntoParallelIterator`.
    pub trait IntoParallelIterator {
        type Iter;
        type Item;
        fn into_par_iter(self) -> Self::Iter;
    }

    impl<I: IntoIterator> IntoParallelIterator for I {
        type Iter = I::IntoIter;
        type Item = I::Item;
        fn into_par_iter(self) -> Self::Iter {
            self.into_iter()
        }
    }
}

#[cfg(not(feature = "parallel"))]
pub use sequential::*;

/// Execution strategy for the data-parallel loops.
///
/// `Parallel` runs on the rayon pool when the `parallel` feature is enabled and
/// falls back to a plain loop otherwise.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

/// Maps `f` over `items`, preserving order.
pub fn map_collect<T, R, F>(items: Vec<T>, exec: Exec, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Sync + Send,
{
    match exec {
        Exec::Sequential => items.into_iter().map(f).collect(),
        Exec::Parallel => items.into_par_iter().map(f).collect(),
    }
}
