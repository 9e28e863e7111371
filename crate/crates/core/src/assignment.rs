//! Exact assignment solvers on dense square cost matrices.

/// Minimum-cost perfect assignment by shortest augmenting paths with
/// potentials, `O(n³)`. Returns `assignment[row] = column` and the total cost.
pub fn min_cost_assignment(cost: &[Vec<f64>]) -> (Vec<usize>, f64) {
    let n = cost.len();
    if n == 0 {
        return (Vec::new(), 0.0);
    }
    debug_assert!(cost.iter().all(|r| r.len() == n));
    // 1-based arrays; column 0 is a virtual start.
    let mut u = vec![0.0f64; n + 1];
    let mut v = vec![0.0f64; n + 1];
    let mut owner = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        owner[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = owner[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0usize;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if owner[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            owner[j0] = owner[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut assignment = vec![0usize; n];
    for j in 1..=n {
        assignment[owner[j] - 1] = j - 1;
    }
    let total = assignment.iter().enumerate().map(|(i, &j)| cost[i][j]).sum();
    (assignment, total)
}

/// Whether the bipartite graph with edges `cost[i][j] <= threshold` has a
/// perfect matching (Kuhn's augmenting paths).
fn has_perfect_matching(cost: &[Vec<f64>], threshold: f64) -> bool {
    let n = cost.len();
    let adj: Vec<Vec<usize>> = cost
        .iter()
        .map(|row| (0..n).filter(|&j| row[j] <= threshold).collect())
        .collect();
    let mut match_col: Vec<Option<usize>> = vec![None; n];
    fn augment(i: usize, adj: &[Vec<usize>], seen: &mut [bool], match_col: &mut [Option<usize>]) -> bool {
        for &j in &adj[i] {
            if !seen[j] {
                seen[j] = true;
                if match_col[j].is_none_or(|k| augment(k, adj, seen, match_col)) {
                    match_col[j] = Some(i);
                    return true;
                }
            }
        }
        false
    }
    for i in 0..n {
        let mut seen = vec![false; n];
        if !augment(i, &adj, &mut seen, &mut match_col) {
            return false;
        }
    }
    true
}

/// Minimal `t` such that a perfect assignment uses only entries `<= t`.
pub fn bottleneck_assignment(cost: &[Vec<f64>]) -> f64 {
    if cost.is_empty() {
        return 0.0;
    }
    let mut values: Vec<f64> = cost.iter().flatten().copied().collect();
    values.sort_by(f64::total_cmp);
    values.dedup();
    let (mut lo, mut hi) = (0usize, values.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if has_perfect_matching(cost, values[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    values[lo]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_force(cost: &[Vec<f64>]) -> (f64, f64) {
        fn rec(i: usize, cost: &[Vec<f64>], used: &mut Vec<bool>, sum: f64, mx: f64, best: &mut (f64, f64)) {
            if i == cost.len() {
                best.0 = best.0.min(sum);
                best.1 = best.1.min(mx);
                return;
            }
            for j in 0..cost.len() {
                if !used[j] {
                    used[j] = true;
                    rec(i + 1, cost, used, sum + cost[i][j], mx.max(cost[i][j]), best);
                    used[j] = false;
                }
            }
        }
        let mut best = (f64::INFINITY, f64::INFINITY);
        rec(0, cost, &mut vec![false; cost.len()], 0.0, 0.0, &mut best);
        best
    }

    #[test]
    fn matches_brute_force() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for n in 1..=6 {
            for _ in 0..30 {
                let cost: Vec<Vec<f64>> =
                    (0..n).map(|_| (0..n).map(|_| rng.random_range(0..20) as f64 / 4.0).collect()).collect();
                let (assignment, total) = min_cost_assignment(&cost);
                let mut cols = assignment.clone();
                cols.sort();
                assert_eq!(cols, (0..n).collect::<Vec<_>>());
                let (bf_sum, bf_max) = brute_force(&cost);
                assert!((total - bf_sum).abs() < 1e-9);
                assert_eq!(bottleneck_assignment(&cost), bf_max);
            }
        }
    }

    #[test]
    fn empty() {
        assert_eq!(min_cost_assignment(&[]).1, 0.0);
        assert_eq!(bottleneck_assignment(&[]), 0.0);
    }
}
