//! Execution strategy for embarrassingly parallel loops, plus the seed
//! derivation that keeps them reproducible under any schedule.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// How sample loops are executed. Results are identical either way.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    /// Uses rayon when the `parallel` feature is enabled, otherwise falls
    /// back to sequential execution.
    #[default]
    Parallel,
}

/// Evaluates `f(0..count)` and collects the results in index order.
pub fn map_indices<R, F>(count: usize, exec: Exec, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    match exec {
        Exec::Sequential => (0..count).map(f).collect(),
        Exec::Parallel => parallel_map(count, f),
    }
}

#[cfg(feature = "parallel")]
fn parallel_map<R, F>(count: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    use rayon::prelude::*;
    (0..count).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn parallel_map<R, F>(count: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    (0..count).map(f).collect()
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Hash of a seed and a path of indices, e.g. `(seed, tier, sample)`.
pub fn derive_seed(seed: u64, path: &[u64]) -> u64 {
    path.iter()
        .fold(splitmix64(seed), |acc, &x| {
            splitmix64(acc.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ x)
        })
}

/// Generator for one unit of work, independent of execution order.
pub fn rng_for(seed: u64, path: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(seed, path))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn seed_and_path_do_not_commute() {
        assert_ne!(derive_seed(0, &[1]), derive_seed(1, &[0]));
        assert_ne!(derive_seed(0, &[1, 2]), derive_seed(0, &[2, 1]));
        assert_ne!(derive_seed(5, &[]), derive_seed(5, &[0]));
    }

    #[test]
    fn schedule_independent() {
        let draw = |i: usize| rng_for(7, &[3, i as u64]).random::<u64>();
        assert_eq!(
            map_indices(64, Exec::Sequential, draw),
            map_indices(64, Exec::Parallel, draw)
        );
    }

    #[test]
    fn paths_are_distinct() {
        assert_ne!(derive_seed(0, &[1, 2]), derive_seed(0, &[2, 1]));
        assert_ne!(derive_seed(0, &[1]), derive_seed(1, &[1]));
    }
}
