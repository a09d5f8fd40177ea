//! Batch execution: rayon when the `parallel` feature is on, sequential otherwise.
//!
//! Every batch entry point takes an [`Execution`] so benchmarks can compare both
//! paths in one build. Randomized batches derive one RNG per item from
//! `(seed, index)`, which keeps results identical across modes and thread counts.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    /// Falls back to sequential when built without the `parallel` feature.
    #[default]
    Parallel,
}

impl Execution {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

/// RNG for item `index` of a batch seeded with `seed`.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Maps `f` over `0..count`, preserving order.
pub fn map_indexed<T, F>(mode: Execution, count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Send + Sync,
{
    #[cfg(feature = "parallel")]
    if mode.is_parallel() {
        use rayon::prelude::*;
        return (0..count).into_par_iter().map(f).collect();
    }
    let _ = mode;
    (0..count).map(f).collect()
}

/// Maps `f` over a slice, preserving order.
pub fn map_slice<S, T, F>(mode: Execution, items: &[S], f: F) -> Vec<T>
where
    S: Sync,
    T: Send,
    F: Fn(&S) -> T + Send + Sync,
{
    #[cfg(feature = "parallel")]
    if mode.is_parallel() {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    let _ = mode;
    items.iter().map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn modes_agree() {
        let f = |i: usize| {
            let mut rng = trial_rng(7, i as u64);
            rng.random::<u64>()
        };
        let a = map_indexed(Execution::Sequential, 64, f);
        let b = map_indexed(Execution::Parallel, 64, f);
        assert_eq!(a, b);
        assert_ne!(a[0], a[1]);
    }
}
