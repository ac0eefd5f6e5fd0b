//! Minimum-cost perfect assignment on a square cost matrix (Hungarian method
//! with potentials, O(n^3)).

/// Returns `assign` with `assign[row] = column` minimizing the total cost.
pub fn min_cost_assignment(cost: &[Vec<i64>]) -> Vec<usize> {
    let n = cost.len();
    if n == 0 {
        return Vec::new();
    }
    const INF: i64 = i64::MAX / 4;
    // 1-based internally; column 0 is a sentinel.
    let mut u = vec![0i64; n + 1];
    let mut v = vec![0i64; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0;
        let mut minv = vec![INF; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = INF;
            let mut j1 = 0;
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
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut assign = vec![0; n];
    for j in 1..=n {
        assign[p[j] - 1] = j - 1;
    }
    assign
}

#[cfg(test)]
mod tests {
    use super::*;
    use itertools::Itertools;
    use proptest::prelude::*;

    #[test]
    fn small_matrix() {
        let cost = vec![vec![4, 1, 3], vec![2, 0, 5], vec![3, 2, 2]];
        let a = min_cost_assignment(&cost);
        let total: i64 = a.iter().enumerate().map(|(i, &j)| cost[i][j]).sum();
        assert_eq!(total, 5);
    }

    proptest! {
        #[test]
        fn matches_all_permutations(n in 1usize..7, vals in proptest::collection::vec(-5i64..10, 36)) {
            let cost: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| vals[i * 6 + j]).collect()).collect();
            let a = min_cost_assignment(&cost);
            let mut seen = vec![false; n];
            for &j in &a { prop_assert!(!seen[j]); seen[j] = true; }
            let got: i64 = a.iter().enumerate().map(|(i, &j)| cost[i][j]).sum();
            let best = (0..n).permutations(n)
                .map(|p| p.iter().enumerate().map(|(i, &j)| cost[i][j]).sum::<i64>())
                .min().unwrap();
            prop_assert_eq!(got, best);
        }
    }
}
