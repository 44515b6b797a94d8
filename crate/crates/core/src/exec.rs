//! Execution policy for the data-parallel inner loops.
//!
//! Every parallel loop in the crate maps an index to a value (or fills a
//! disjoint chunk of an output buffer) with a fixed, index-local summation
//! order, so results are bitwise identical under either policy. Without the
//! `parallel` feature, [`Execution::Parallel`] silently runs sequentially.

/// How the O(N²) convolutions and batch sweeps are scheduled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
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
    /// True when work will actually be spread over the rayon pool.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }

    /// Evaluates `f(i)` for `i in 0..n` and collects the results in index order.
    pub fn map_indices<T, F>(self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self == Execution::Parallel {
            use rayon::prelude::*;
            return (0..n).into_par_iter().map(f).collect();
        }
        (0..n).map(f).collect()
    }

    /// Maps `f` over a slice, preserving order.
    pub fn map_slice<S, T, F>(self, items: &[S], f: F) -> Vec<T>
    where
        S: Sync,
        T: Send,
        F: Fn(&S) -> T + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self == Execution::Parallel {
            use rayon::prelude::*;
            return items.par_iter().map(f).collect();
        }
        items.iter().map(f).collect()
    }

    /// Calls `f(offset, chunk)` on consecutive mutable chunks of `out`.
    pub fn for_each_chunk_mut<T, F>(self, out: &mut [T], chunk: usize, f: F)
    where
        T: Send,
        F: Fn(usize, &mut [T]) + Sync + Send,
    {
        let chunk = chunk.max(1);
        #[cfg(feature = "parallel")]
        if self == Execution::Parallel {
            use rayon::prelude::*;
            out.par_chunks_mut(chunk)
                .enumerate()
                .for_each(|(c, part)| f(c * chunk, part));
            return;
        }
        for (c, part) in out.chunks_mut(chunk).enumerate() {
            f(c * chunk, part);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_policies_agree() {
        let f = |i: usize| (i as f64).sqrt().sin();
        let a = Execution::Sequential.map_indices(1000, f);
        let b = Execution::Parallel.map_indices(1000, f);
        assert_eq!(a, b);

        let mut x = vec![0usize; 103];
        let mut y = vec![0usize; 103];
        Execution::Sequential.for_each_chunk_mut(&mut x, 10, |off, c| {
            for (k, v) in c.iter_mut().enumerate() {
                *v = off + k;
            }
        });
        Execution::Parallel.for_each_chunk_mut(&mut y, 10, |off, c| {
            for (k, v) in c.iter_mut().enumerate() {
                *v = off + k;
            }
        });
        assert_eq!(x, y);
        assert_eq!(x[102], 102);
    }
}
