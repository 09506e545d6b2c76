//! Minimum-cost perfect assignment (shortest augmenting path Hungarian method).

/// Solves the square assignment problem for `cost` (row-major, `n x n`).
///
/// `f64::INFINITY` marks a forbidden pair. Returns `row_to_col`, or `None`
/// when no finite perfect assignment exists.
pub fn solve(n: usize, cost: &[f64]) -> Option<Vec<usize>> {
    assert_eq!(cost.len(), n * n);
    if n == 0 {
        return Some(Vec::new());
    }
    // 1-based potentials and matching, column 0 is a sentinel.
    let mut u = vec![0.0f64; n + 1];
    let mut v = vec![0.0f64; n + 1];
    let mut col_owner = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    let mut minv = vec![0.0f64; n + 1];
    let mut used = vec![false; n + 1];

    for row in 1..=n {
        col_owner[0] = row;
        let mut j0 = 0usize;
        minv.iter_mut().for_each(|m| *m = f64::INFINITY);
        used.iter_mut().for_each(|x| *x = false);
        loop {
            used[j0] = true;
            let i0 = col_owner[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0usize;
            let base = (i0 - 1) * n;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = cost[base + j - 1] - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            if !delta.is_finite() {
                return None;
            }
            for j in 0..=n {
                if used[j] {
                    u[col_owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if col_owner[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            col_owner[j0] = col_owner[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut row_to_col = vec![0usize; n];
    for j in 1..=n {
        row_to_col[col_owner[j] - 1] = j - 1;
    }
    Some(row_to_col)
}

/// Whether a perfect matching exists using only pairs with `allowed(row, col)`.
///
/// Returns the matching (`row_to_col`) if so. Kuhn's augmenting-path method.
pub fn perfect_matching<F>(n: usize, allowed: F) -> Option<Vec<usize>>
where
    F: Fn(usize, usize) -> bool,
{
    let adj: Vec<Vec<usize>> = (0..n)
        .map(|r| (0..n).filter(|&c| allowed(r, c)).collect())
        .collect();
    let mut col_owner = vec![usize::MAX; n];
    let mut seen = vec![false; n];

    fn augment(r: usize, adj: &[Vec<usize>], seen: &mut [bool], col_owner: &mut [usize]) -> bool {
        for &c in &adj[r] {
            if seen[c] {
                continue;
            }
            seen[c] = true;
            if col_owner[c] == usize::MAX || augment(col_owner[c], adj, seen, col_owner) {
                col_owner[c] = r;
                return true;
            }
        }
        false
    }

    for r in 0..n {
        seen.iter_mut().for_each(|s| *s = false);
        if !augment(r, &adj, &mut seen, &mut col_owner) {
            return None;
        }
    }
    let mut row_to_col = vec![0; n];
    for (c, &r) in col_owner.iter().enumerate() {
        row_to_col[r] = c;
    }
    Some(row_to_col)
}
