//! Execution helpers: data-parallel by default, sequential on demand.
//!
//! With the `parallel` feature (the default) the bulk operations — trial
//! maps and enumeration folds — run on the rayon pool. The `*_seq` siblings
//! always run sequentially and are part of the public surface so callers
//! (and the benches) can compare both paths. Every reduction used here is
//! associative and commutative with deterministic tie-breaking applied in
//! the merge, so results and all downstream artifacts are identical for any
//! worker count, including one; without the feature the parallel entry
//! points simply are the sequential ones.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Applies `f` to `0..n`, returning results in index order.
pub fn map_indexed<T: Send>(n: usize, f: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        map_indexed_seq(n, f)
    }
}

/// Sequential sibling of [`map_indexed`].
pub fn map_indexed_seq<T>(n: usize, f: impl Fn(usize) -> T) -> Vec<T> {
    (0..n).map(f).collect()
}

/// Folds every value of `0..n` into accumulators created by `identity`,
/// merging partial accumulators with `merge`. `fold` and `merge` must
/// together be order-insensitive (associative + commutative up to the
/// caller's tie-breaking) for the result to be worker-count-independent.
pub fn fold_range<A: Send>(
    n: u64,
    identity: impl Fn() -> A + Sync + Send,
    fold: impl Fn(A, u64) -> A + Sync + Send,
    merge: impl Fn(A, A) -> A + Sync + Send,
) -> A {
    #[cfg(feature = "parallel")]
    {
        (0..n)
            .into_par_iter()
            .fold(&identity, &fold)
            .reduce(&identity, &merge)
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = &merge;
        fold_range_seq(n, identity, fold)
    }
}

/// Sequential sibling of [`fold_range`] (no merge step needed).
pub fn fold_range_seq<A>(
    n: u64,
    identity: impl Fn() -> A,
    fold: impl Fn(A, u64) -> A,
) -> A {
    (0..n).fold(identity(), fold)
}
