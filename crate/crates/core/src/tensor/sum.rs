/// Pairwise (cascade) summation of `term(i)` for `i` in `0..n`.
///
/// Rounding error grows as `O(log n)` instead of `O(n)` for a running sum.
pub(crate) fn pairwise_sum<F: Fn(usize) -> f64>(n: usize, term: F) -> f64 {
    sum_range(0, n, &term)
}

const BLOCK: usize = 16;

fn sum_range<F: Fn(usize) -> f64>(lo: usize, hi: usize, term: &F) -> f64 {
    if hi - lo <= BLOCK {
        let mut s = 0.0;
        for i in lo..hi {
            s += term(i);
        }
        s
    } else {
        let mid = lo + (hi - lo) / 2;
        sum_range(lo, mid, term) + sum_range(mid, hi, term)
    }
}

/// Contract the last axis of a row-major block of `outer * n` entries with `x`.
pub(crate) fn contract_last<T: Copy + Into<f64>>(data: &[T], n: usize, x: &[f64]) -> Vec<f64> {
    debug_assert_eq!(x.len(), n);
    debug_assert_eq!(data.len() % n, 0);
    data.chunks_exact(n)
        .map(|row| pairwise_sum(n, |j| row[j].into() * x[j]))
        .collect()
}

/// Contract the first axis of a row-major block of shape `(n, inner)` with `x`.
pub(crate) fn contract_first<T: Copy + Into<f64>>(data: &[T], n: usize, x: &[f64]) -> Vec<f64> {
    debug_assert_eq!(x.len(), n);
    let inner = data.len() / n;
    (0..inner)
        .map(|i| pairwise_sum(n, |j| data[j * inner + i].into() * x[j]))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairwise_matches_exact_integer_sums() {
        for n in [0, 1, 15, 16, 17, 100, 1000] {
            let s = pairwise_sum(n, |i| i as f64);
            assert_eq!(s, (n * n.saturating_sub(1) / 2) as f64);
        }
    }

    #[test]
    fn contractions() {
        // [[1,2,3],[4,5,6]]
        let data = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
        assert_eq!(contract_last(&data, 3, &[1.0, 0.0, -1.0]), vec![-2.0, -2.0]);
        assert_eq!(contract_first(&data, 2, &[1.0, 1.0]), vec![5.0, 7.0, 9.0]);
    }
}
