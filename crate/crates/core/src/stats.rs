//! Order-independent summary statistics.
//!
//! Sums are pairwise over a fixed tree, so the result depends only on the
//! sequence of values and never on how they were produced.

use crate::scalar::Scalar;

pub fn pairwise_sum<T: Scalar>(xs: &[T]) -> T {
    const LEAF: usize = 32;
    if xs.len() <= LEAF {
        return xs.iter().fold(T::zero(), |a, &b| a + b);
    }
    let (lo, hi) = xs.split_at(xs.len() / 2);
    pairwise_sum(lo) + pairwise_sum(hi)
}

/// Sample mean and standard error of the mean.
///
/// Computed on values shifted by the first sample, so a constant sequence
/// yields that constant and a standard error of exactly zero.
pub fn mean_and_std_error<T: Scalar>(xs: &[T]) -> (T, T) {
    let Some(&shift) = xs.first() else {
        return (T::nan(), T::nan());
    };
    let n = T::from_usize_lossy(xs.len());
    let centered: Vec<T> = xs.iter().map(|&x| x - shift).collect();
    let mean_offset = pairwise_sum(&centered) / n;
    let mean = shift + mean_offset;
    if xs.len() < 2 {
        return (mean, T::zero());
    }
    let sq: Vec<T> = centered
        .iter()
        .map(|&d| (d - mean_offset) * (d - mean_offset))
        .collect();
    let var = pairwise_sum(&sq) / (n - T::one());
    (mean, (var / n).sqrt())
}
