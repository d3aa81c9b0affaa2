//! Bottleneck assignment: pair two equally sized point sets so that the
//! largest pairwise distance is as small as possible.

/// A perfect pairing between two sets; `pairs[i]` is the index in the second
/// set matched to element `i` of the first.
#[derive(Debug, Clone, PartialEq)]
pub struct Assignment {
    pub pairs: Vec<usize>,
    pub max_cost: f64,
}

/// Minimise the maximum cost over all perfect matchings of a square cost
/// matrix. Returns `None` for an empty or non-square matrix.
pub fn bottleneck_assignment(cost: &[Vec<f64>]) -> Option<Assignment> {
    let n = cost.len();
    if n == 0 || cost.iter().any(|row| row.len() != n) {
        return None;
    }
    let mut levels: Vec<f64> = cost.iter().flatten().copied().collect();
    levels.sort_by(f64::total_cmp);
    levels.dedup();

    // The full matrix always admits a perfect matching, so the search has a
    // feasible upper end.
    let (mut lo, mut hi) = (0usize, levels.len() - 1);
    let mut best = perfect_matching(cost, levels[hi])?;
    while lo < hi {
        let mid = (lo + hi) / 2;
        match perfect_matching(cost, levels[mid]) {
            Some(m) => {
                best = m;
                hi = mid;
            }
            None => lo = mid + 1,
        }
    }
    if best.len() != n {
        return None;
    }
    let max_cost = best.iter().enumerate().map(|(i, &j)| cost[i][j]).fold(0.0, f64::max);
    Some(Assignment { pairs: best, max_cost })
}

/// Kuhn's augmenting-path matching restricted to edges with cost <= threshold.
fn perfect_matching(cost: &[Vec<f64>], threshold: f64) -> Option<Vec<usize>> {
    let n = cost.len();
    let mut owner: Vec<Option<usize>> = vec![None; n];
    for row in 0..n {
        let mut seen = vec![false; n];
        if !augment(row, cost, threshold, &mut seen, &mut owner) {
            return None;
        }
    }
    let mut pairs = vec![0; n];
    for (col, o) in owner.iter().enumerate() {
        pairs[o.expect("perfect matching covers every column")] = col;
    }
    Some(pairs)
}

fn augment(row: usize, cost: &[Vec<f64>], threshold: f64, seen: &mut [bool], owner: &mut [Option<usize>]) -> bool {
    for col in 0..cost.len() {
        if cost[row][col] <= threshold && !seen[col] {
            seen[col] = true;
            let free = match owner[col] {
                None => true,
                Some(other) => augment(other, cost, threshold, seen, owner),
            };
            if free {
                owner[col] = Some(row);
                return true;
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_force(cost: &[Vec<f64>]) -> f64 {
        fn rec(cost: &[Vec<f64>], row: usize, used: &mut Vec<bool>, cur: f64, best: &mut f64) {
            if row == cost.len() {
                *best = best.min(cur);
                return;
            }
            for c in 0..cost.len() {
                if !used[c] {
                    used[c] = true;
                    rec(cost, row + 1, used, cur.max(cost[row][c]), best);
                    used[c] = false;
                }
            }
        }
        let mut best = f64::INFINITY;
        rec(cost, 0, &mut vec![false; cost.len()], 0.0, &mut best);
        best
    }

    #[test]
    fn greedy_trap_is_avoided() {
        // Greedy takes (0,0) at cost 0 and is then forced into cost 10.
        let cost = vec![vec![0.0, 1.0], vec![10.0, 1.0]];
        let a = bottleneck_assignment(&cost).unwrap();
        assert_eq!(a.max_cost, 1.0);
        let cost = vec![vec![0.0, 1.0], vec![1.0, 10.0]];
        let a = bottleneck_assignment(&cost).unwrap();
        assert_eq!(a.pairs, vec![1, 0]);
        assert_eq!(a.max_cost, 1.0);
    }

    #[test]
    fn matches_brute_force_on_pseudo_random_matrices() {
        let mut state = 0x2545_f491_4f6c_dd1du64;
        let mut next = || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state % 1000) as f64 / 10.0
        };
        for n in 1..=6 {
            for _ in 0..20 {
                let cost: Vec<Vec<f64>> = (0..n).map(|_| (0..n).map(|_| next()).collect()).collect();
                let a = bottleneck_assignment(&cost).unwrap();
                assert_eq!(a.max_cost, brute_force(&cost));
                let mut cols = a.pairs.clone();
                cols.sort();
                assert_eq!(cols, (0..n).collect::<Vec<_>>());
            }
        }
    }

    #[test]
    fn empty_and_ragged_inputs() {
        assert!(bottleneck_assignment(&[]).is_none());
        assert!(bottleneck_assignment(&[vec![1.0, 2.0]]).is_none());
    }
}
