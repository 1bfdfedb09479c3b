//! Sequential / data-parallel execution switch.
//!
//! Callers pick [`Exec::Parallel`] or [`Exec::Sequential`] at run time. When
//! the crate is built without the `parallel` feature the parallel variant
//! silently runs sequentially. Every parallel loop in the crate maps over
//! indices with per-index derived randomness, so both paths produce identical
//! output.

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

impl Exec {
    /// `workers == 1` selects the sequential path.
    pub fn from_workers(workers: usize) -> Self {
        if workers <= 1 {
            Exec::Sequential
        } else {
            Exec::Parallel
        }
    }

    /// Sizes the global rayon pool. Later calls, and builds without the
    /// `parallel` feature, leave things as they are.
    pub fn init_workers(workers: usize) {
        #[cfg(feature = "parallel")]
        if workers > 1 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(workers).build_global();
        }
        #[cfg(not(feature = "parallel"))]
        let _ = workers;
    }

    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }

    /// `(0..len).map(f).collect()`, possibly on the rayon pool.
    pub fn map_indexed<T, F>(self, len: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self == Exec::Parallel {
            use rayon::prelude::*;
            return (0..len).into_par_iter().map(f).collect();
        }
        (0..len).map(f).collect()
    }

    /// `items.iter().map(f).collect()`, possibly on the rayon pool.
    pub fn map_slice<S, T, F>(self, items: &[S], f: F) -> Vec<T>
    where
        S: Sync,
        T: Send,
        F: Fn(&S) -> T + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self == Exec::Parallel {
            use rayon::prelude::*;
            return items.par_iter().map(f).collect();
        }
        items.iter().map(f).collect()
    }

    /// Fill `out[i] = f(i)` in place.
    pub fn fill_indexed<T, F>(self, out: &mut [T], f: F)
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self == Exec::Parallel {
            use rayon::prelude::*;
            out.par_iter_mut().enumerate().for_each(|(i, x)| *x = f(i));
            return;
        }
        for (i, x) in out.iter_mut().enumerate() {
            *x = f(i);
        }
    }
}
