//! Deterministic parallel reductions for the O(n²) pair sums.
//!
//! Work is split into fixed-size blocks that do not depend on the number of
//! threads. Each block is summed sequentially, and the block partials are
//! combined with a fixed pairwise tree, so results are bit-identical for any
//! thread count.

use rayon::prelude::*;

/// Rows per block. Fixed so the reduction tree never depends on the pool.
pub const BLOCK_ROWS: usize = 64;

/// Pairwise (cascade) summation in a fixed tree order.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => values[0],
        2 => values[0] + values[1],
        n if n <= 8 => values.iter().fold(0.0, |a, b| a + b),
        n => {
            let mid = n / 2;
            pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
        }
    }
}

/// Sum `row(i)` over `0..n`, in parallel blocks, deterministically.
pub fn block_sum<F>(n: usize, row: F) -> f64
where
    F: Fn(usize) -> f64 + Sync,
{
    let blocks = n.div_ceil(BLOCK_ROWS);
    let partials: Vec<f64> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let lo = b * BLOCK_ROWS;
            let hi = (lo + BLOCK_ROWS).min(n);
            let rows: Vec<f64> = (lo..hi).map(&row).collect();
            pairwise_sum(&rows)
        })
        .collect();
    pairwise_sum(&partials)
}

/// Integer sum of `row(i)` over `0..n` in parallel; exact, so order-free.
pub fn block_sum_u128<F>(n: usize, row: F) -> u128
where
    F: Fn(usize) -> u128 + Sync + Send,
{
    (0..n).into_par_iter().map(row).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairwise_matches_exact_small() {
        let v: Vec<f64> = (1..=100).map(|k| k as f64).collect();
        assert_eq!(pairwise_sum(&v), 5050.0);
        assert_eq!(pairwise_sum(&[]), 0.0);
    }

    #[test]
    fn block_sum_is_thread_count_invariant() {
        let f = |i: usize| ((i as f64) * 0.37).sin() / (1.0 + i as f64);
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
        let a = one.install(|| block_sum(10_007, f));
        let b = four.install(|| block_sum(10_007, f));
        assert_eq!(a.to_bits(), b.to_bits());
    }
}
