//! Counting by brute-force enumeration: standard Young tableaux of
//! rectangles and iterated Pieri products in a `rows × cols` box.

use std::collections::BTreeMap;

/// Standard tableaux of the `rows × cols` rectangle, by placing `1, 2, …`
/// one cell at a time.
pub fn standard_tableaux_rectangle(rows: usize, cols: usize) -> u64 {
    fn fill(shape: &mut Vec<usize>, cols: usize, remaining: usize) -> u64 {
        if remaining == 0 {
            return 1;
        }
        let mut total = 0;
        for r in 0..shape.len() {
            let fits = shape[r] < cols && (r == 0 || shape[r - 1] > shape[r]);
            if fits {
                shape[r] += 1;
                total += fill(shape, cols, remaining - 1);
                shape[r] -= 1;
            }
        }
        total
    }
    fill(&mut vec![0; rows], cols, rows * cols)
}

/// `C(2m, m)/(m+1)` by the recurrence `C_{m+1} = Σ C_i C_{m−i}`.
pub fn catalan(m: usize) -> u64 {
    let mut c = vec![1u64];
    for n in 0..m {
        c.push((0..=n).map(|i| c[i] * c[n - i]).sum());
    }
    c[m]
}

/// All shapes `μ ⊇ λ` inside the box with `μ/λ` a horizontal strip of size
/// `r` (`λ` has exactly `rows` entries, zeros allowed).
fn horizontal_strips(lambda: &[usize], r: usize, cols: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut mu = lambda.to_vec();
    fn rec(
        i: usize,
        left: usize,
        lambda: &[usize],
        mu: &mut Vec<usize>,
        cols: usize,
        out: &mut Vec<Vec<usize>>,
    ) {
        if i == lambda.len() {
            if left == 0 {
                out.push(mu.clone());
            }
            return;
        }
        // row i may grow up to the old length of row i−1 (or the box width)
        let cap = if i == 0 { cols } else { lambda[i - 1] };
        for add in 0..=left.min(cap.saturating_sub(lambda[i])) {
            mu[i] = lambda[i] + add;
            rec(i + 1, left - add, lambda, mu, cols, out);
        }
        mu[i] = lambda[i];
    }
    rec(0, r, lambda, &mut mu, cols, &mut out);
    out
}

/// Coefficient of the full box in `s_{(r₁)} · s_{(r₂)} ⋯` (one-row
/// partitions), expanding by Pieri's rule with in-box truncation.
pub fn pieri_box_coefficient(rows: usize, cols: usize, row_parts: &[usize]) -> u64 {
    let mut state: BTreeMap<Vec<usize>, u64> = BTreeMap::from([(vec![0; rows], 1)]);
    for &r in row_parts {
        let mut next = BTreeMap::new();
        for (lambda, mult) in state {
            for mu in horizontal_strips(&lambda, r, cols) {
                *next.entry(mu).or_insert(0) += mult;
            }
        }
        state = next;
    }
    state.get(&vec![cols; rows]).copied().unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalan_numbers() {
        assert_eq!(
            (0..8).map(catalan).collect::<Vec<_>>(),
            vec![1, 1, 2, 5, 14, 42, 132, 429]
        );
        for m in 1..7 {
            assert_eq!(standard_tableaux_rectangle(2, m), catalan(m));
        }
        assert_eq!(standard_tableaux_rectangle(3, 3), 42);
    }

    #[test]
    fn pieri_small_cases() {
        assert_eq!(pieri_box_coefficient(2, 2, &[1, 1, 1, 1]), 2);
        assert_eq!(pieri_box_coefficient(2, 4, &[2, 2, 2, 2]), 3);
        assert_eq!(pieri_box_coefficient(3, 3, &[1; 9]), 42);
    }
}
