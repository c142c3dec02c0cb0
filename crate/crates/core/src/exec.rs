//! Execution helpers for data-parallel loops.
//!
//! With the `parallel` feature enabled (default) the indexed map runs on the
//! rayon thread pool; results are always collected in index order, so parallel
//! and sequential execution produce identical output.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Applies `f` to every index in `0..n`, collecting results in index order.
#[cfg(feature = "parallel")]
pub(crate) fn map_indexed<U: Send>(n: usize, f: impl Fn(usize) -> U + Send + Sync) -> Vec<U> {
    (0..n).into_par_iter().map(f).collect()
}

/// Applies `f` to every index in `0..n`, collecting results in index order.
#[cfg(not(feature = "parallel"))]
pub(crate) fn map_indexed<U: Send>(n: usize, f: impl Fn(usize) -> U + Send + Sync) -> Vec<U> {
    (0..n).map(f).collect()
}

/// Sequential twin of [`map_indexed`]; always runs on the calling thread.
pub(crate) fn map_indexed_seq<U>(n: usize, f: impl Fn(usize) -> U) -> Vec<U> {
    (0..n).map(f).collect()
}

/// Finds the index in `0..n` maximizing `score`, breaking ties toward the
/// smallest index. Returns `None` only for `n == 0`.
///
/// The reduction is associative and commutative (max with deterministic
/// tie-break), so the parallel result is independent of work splitting.
#[cfg(feature = "parallel")]
pub(crate) fn argmax_indexed(
    n: u64,
    score: impl Fn(u64) -> f64 + Send + Sync,
) -> Option<(u64, f64)> {
    (0..n)
        .into_par_iter()
        .map(|i| (i, score(i)))
        .reduce_with(better)
}

/// Finds the index in `0..n` maximizing `score`, breaking ties toward the
/// smallest index. Returns `None` only for `n == 0`.
#[cfg(not(feature = "parallel"))]
pub(crate) fn argmax_indexed(
    n: u64,
    score: impl Fn(u64) -> f64 + Send + Sync,
) -> Option<(u64, f64)> {
    argmax_indexed_seq(n, score)
}

/// Sequential twin of [`argmax_indexed`].
pub(crate) fn argmax_indexed_seq(n: u64, score: impl Fn(u64) -> f64) -> Option<(u64, f64)> {
    (0..n).map(|i| (i, score(i))).reduce(better)
}

fn better(a: (u64, f64), b: (u64, f64)) -> (u64, f64) {
    if b.1 > a.1 || (b.1 == a.1 && b.0 < a.0) {
        b
    } else {
        a
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn map_preserves_index_order() {
        let out = map_indexed(5, |i| i * 2);
        assert_eq!(out, vec![0, 2, 4, 6, 8]);
        assert_eq!(out, map_indexed_seq(5, |i| i * 2));
    }

    #[test]
    fn argmax_breaks_ties_toward_smallest_index() {
        let scores = [1.0, 3.0, 3.0, 2.0];
        let got = argmax_indexed(4, |i| scores[i as usize]);
        assert_eq!(got, Some((1, 3.0)));
        assert_eq!(got, argmax_indexed_seq(4, |i| scores[i as usize]));
    }

    #[test]
    fn argmax_empty_is_none() {
        assert_eq!(argmax_indexed(0, |_| 0.0), None);
    }
}
