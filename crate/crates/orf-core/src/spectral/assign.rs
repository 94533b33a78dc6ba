//! Minimum-cost assignment for matching two eigenvalue lists. Comparisons
//! between spectra computed along different routes need a pairing that is
//! stable under reordering; optimal assignment on pairwise distances gives
//! one, with a greedy pairing as fallback for very large lists.

use num_complex::Complex64;

/// Order above which matching falls back to the greedy pairing.
const ASSIGNMENT_LIMIT: usize = 512;

/// Minimum-cost perfect matching on a square cost matrix, Hungarian method
/// with potentials, O(n^3). Returns `assign` with `assign[i] = j` pairing
/// row `i` to column `j`.
pub fn min_cost_assignment(cost: &[Vec<f64>]) -> Vec<usize> {
    let n = cost.len();
    if n == 0 {
        return Vec::new();
    }
    // 1-based arrays with column 0 as virtual start; p[j] = row matched to j
    let mut u = vec![0.0f64; n + 1];
    let mut v = vec![0.0f64; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
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
        // augment along the alternating path back to the start
        while j0 != 0 {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        }
    }
    let mut assign = vec![0usize; n];
    for j in 1..=n {
        assign[p[j] - 1] = j - 1;
    }
    assign
}

fn greedy_assignment(cost: &[Vec<f64>]) -> Vec<usize> {
    let n = cost.len();
    let mut taken = vec![false; n];
    let mut assign = vec![0usize; n];
    for (i, row) in cost.iter().enumerate() {
        let mut best = f64::INFINITY;
        let mut bj = 0usize;
        for (j, &c) in row.iter().enumerate() {
            if !taken[j] && c < best {
                best = c;
                bj = j;
            }
        }
        taken[bj] = true;
        assign[i] = bj;
    }
    assign
}

/// Pairing of two equally long eigenvalue lists minimizing the summed
/// distances: `got[i]` matches `want[result[i]]`. Uses optimal assignment,
/// or the greedy pairing beyond the size limit.
///
/// Panics when the lists have different lengths.
pub fn match_eigenvalues(got: &[Complex64], want: &[Complex64]) -> Vec<usize> {
    assert_eq!(got.len(), want.len(), "eigenvalue lists must have equal length");
    let cost: Vec<Vec<f64>> =
        got.iter().map(|&g| want.iter().map(|&w| (g - w).norm()).collect()).collect();
    if got.len() > ASSIGNMENT_LIMIT {
        greedy_assignment(&cost)
    } else {
        min_cost_assignment(&cost)
    }
}

/// Largest matched distance under the optimal pairing of the two lists.
pub fn matched_distance(got: &[Complex64], want: &[Complex64]) -> f64 {
    let assign = match_eigenvalues(got, want);
    got.iter()
        .enumerate()
        .map(|(i, &g)| (g - want[assign[i]]).norm())
        .fold(0.0f64, f64::max)
}
