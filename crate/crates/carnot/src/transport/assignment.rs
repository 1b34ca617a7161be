//! Exact solver for the square linear assignment problem
//! (Jonker–Volgenant shortest augmenting path with column reduction and
//! augmenting row reduction).
//!
//! Returns the optimal row→column assignment together with dual potentials
//! `(u, v)` satisfying `u[i] + v[j] ≤ cost[i][j]` with equality on assigned
//! pairs, the certificate used downstream for complementary slackness.

const UNASSIGNED: usize = usize::MAX;

/// Optimal assignment of a dense square cost matrix (row-major).
#[derive(Debug, Clone)]
pub struct Assignment {
    /// Column assigned to each row.
    pub row_to_col: Vec<usize>,
    /// Row duals.
    pub u: Vec<f64>,
    /// Column duals.
    pub v: Vec<f64>,
}

impl Assignment {
    /// Total cost of the assignment.
    pub fn cost(&self, n: usize, cost: &[f64]) -> f64 {
        self.row_to_col
            .iter()
            .enumerate()
            .map(|(i, &j)| cost[i * n + j])
            .sum()
    }
}

/// Solves the assignment problem for an `n × n` row-major cost matrix.
pub fn solve_assignment(n: usize, cost: &[f64]) -> Assignment {
    assert!(n > 0, "assignment needs at least one row");
    assert_eq!(cost.len(), n * n, "cost matrix must be n×n row-major");
    assert!(cost.iter().all(|c| c.is_finite()), "costs must be finite");
    let c = |i: usize, j: usize| cost[i * n + j];

    let mut row_to_col = vec![UNASSIGNED; n];
    let mut col_to_row = vec![UNASSIGNED; n];
    let mut v = vec![0.0_f64; n];

    // Column reduction, scanning columns in reverse.
    let mut matches = vec![0_usize; n];
    for j in (0..n).rev() {
        let mut imin = 0;
        for i in 1..n {
            if c(i, j) < c(imin, j) {
                imin = i;
            }
        }
        v[j] = c(imin, j);
        matches[imin] += 1;
        if matches[imin] == 1 {
            row_to_col[imin] = j;
            col_to_row[j] = imin;
        }
    }

    // Reduction transfer from rows assigned exactly once.
    let mut free: Vec<usize> = Vec::with_capacity(n);
    for i in 0..n {
        if matches[i] == 0 {
            free.push(i);
        } else if matches[i] == 1 && n > 1 {
            let j1 = row_to_col[i];
            let mut min = f64::INFINITY;
            for j in 0..n {
                if j != j1 {
                    let r = c(i, j) - v[j];
                    if r < min {
                        min = r;
                    }
                }
            }
            v[j1] -= min;
        }
    }

    // Augmenting row reduction, two passes.
    for _ in 0..2 {
        let mut k = 0;
        let prv_num_free = free.len();
        let mut num_free = 0;
        while k < prv_num_free {
            let i = free[k];
            k += 1;
            // smallest and second-smallest reduced cost over columns
            let mut umin = c(i, 0) - v[0];
            let mut j1 = 0;
            let mut usubmin = f64::INFINITY;
            let mut j2 = UNASSIGNED;
            for j in 1..n {
                let h = c(i, j) - v[j];
                if h < usubmin {
                    if h >= umin {
                        usubmin = h;
                        j2 = j;
                    } else {
                        usubmin = umin;
                        j2 = j1;
                        umin = h;
                        j1 = j;
                    }
                }
            }
            let mut i0 = col_to_row[j1];
            if umin < usubmin {
                v[j1] -= usubmin - umin;
            } else if i0 != UNASSIGNED && j2 != UNASSIGNED {
                j1 = j2;
                i0 = col_to_row[j1];
            }
            row_to_col[i] = j1;
            col_to_row[j1] = i;
            if i0 != UNASSIGNED {
                if umin < usubmin {
                    // requeue the displaced row immediately
                    k -= 1;
                    free[k] = i0;
                } else {
                    free[num_free] = i0;
                    num_free += 1;
                }
            }
        }
        free.truncate(num_free);
    }

    // Shortest augmenting paths for the remaining free rows.
    let mut d = vec![0.0_f64; n];
    let mut pred = vec![0_usize; n];
    let mut col_list: Vec<usize> = (0..n).collect();
    for f in 0..free.len() {
        let free_row = free[f];
        for j in 0..n {
            d[j] = c(free_row, j) - v[j];
            pred[j] = free_row;
            col_list[j] = j;
        }
        let mut low = 0usize; // columns 0..low are settled
        let mut up = 0usize; // columns low..up carry the current minimum
        let mut last = 0usize;
        let mut min = 0.0_f64;
        let mut end_of_path = 0usize;
        let mut found = false;
        while !found {
            if up == low {
                last = low;
                min = d[col_list[up]];
                up += 1;
                for k in up..n {
                    let j = col_list[k];
                    let h = d[j];
                    if h <= min {
                        if h < min {
                            up = low;
                            min = h;
                        }
                        col_list[k] = col_list[up];
                        col_list[up] = j;
                        up += 1;
                    }
                }
                for k in low..up {
                    let j = col_list[k];
                    if col_to_row[j] == UNASSIGNED {
                        end_of_path = j;
                        found = true;
                        break;
                    }
                }
            }
            if !found {
                let j1 = col_list[low];
                low += 1;
                let i = col_to_row[j1];
                let h = c(i, j1) - v[j1] - min;
                for k in up..n {
                    let j = col_list[k];
                    let v2 = c(i, j) - v[j] - h;
                    if v2 < d[j] {
                        pred[j] = i;
                        if v2 == min {
                            if col_to_row[j] == UNASSIGNED {
                                end_of_path = j;
                                found = true;
                                break;
                            }
                            col_list[k] = col_list[up];
                            col_list[up] = j;
                            up += 1;
                        }
                        d[j] = v2;
                    }
                }
            }
        }
        for &j in col_list.iter().take(last) {
            v[j] += d[j] - min;
        }
        // augment along the alternating path
        let mut j = end_of_path;
        loop {
            let i = pred[j];
            col_to_row[j] = i;
            std::mem::swap(&mut row_to_col[i], &mut j);
            if i == free_row {
                break;
            }
        }
    }

    let u = (0..n).map(|i| c(i, row_to_col[i]) - v[row_to_col[i]]).collect();
    Assignment { row_to_col, u, v }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn brute_force(n: usize, cost: &[f64]) -> f64 {
        fn rec(n: usize, cost: &[f64], row: usize, used: &mut [bool], acc: f64, best: &mut f64) {
            if row == n {
                *best = best.min(acc);
                return;
            }
            for j in 0..n {
                if !used[j] {
                    used[j] = true;
                    rec(n, cost, row + 1, used, acc + cost[row * n + j], best);
                    used[j] = false;
                }
            }
        }
        let mut best = f64::INFINITY;
        rec(n, cost, 0, &mut vec![false; n], 0.0, &mut best);
        best
    }

    fn check_certificate(n: usize, cost: &[f64], a: &Assignment) {
        let mut seen = vec![false; n];
        for (i, &j) in a.row_to_col.iter().enumerate() {
            assert!(!seen[j], "column assigned twice");
            seen[j] = true;
            assert!(
                (a.u[i] + a.v[j] - cost[i * n + j]).abs() < 1e-9,
                "slackness violated on assigned pair"
            );
        }
        for i in 0..n {
            for j in 0..n {
                assert!(
                    a.u[i] + a.v[j] <= cost[i * n + j] + 1e-9,
                    "dual infeasible at ({i},{j})"
                );
            }
        }
    }

    #[test]
    fn matches_brute_force_on_random_instances() {
        let mut rng = crate::sample::rng_for(41, 0);
        for n in 1..=7 {
            for _ in 0..60 {
                let cost: Vec<f64> = (0..n * n).map(|_| rng.random_range(0.0..10.0)).collect();
                let a = solve_assignment(n, &cost);
                let got = a.cost(n, &cost);
                let want = brute_force(n, &cost);
                assert!((got - want).abs() < 1e-9, "n={n}: {got} vs {want}");
                check_certificate(n, &cost, &a);
            }
        }
    }

    #[test]
    fn handles_structured_ties() {
        // constant matrix: any permutation is optimal
        let n = 5;
        let cost = vec![1.0; n * n];
        let a = solve_assignment(n, &cost);
        assert!((a.cost(n, &cost) - 5.0).abs() < 1e-12);
        check_certificate(n, &cost, &a);

        // identity-favoring matrix
        let mut cost = vec![1.0; n * n];
        for i in 0..n {
            cost[i * n + i] = 0.0;
        }
        let a = solve_assignment(n, &cost);
        assert_eq!(a.row_to_col, vec![0, 1, 2, 3, 4]);
        check_certificate(n, &cost, &a);
    }

    #[test]
    fn medium_instance_has_valid_duals() {
        let n = 300;
        let mut rng = crate::sample::rng_for(42, 0);
        let cost: Vec<f64> = (0..n * n).map(|_| rng.random_range(0.0..1.0)).collect();
        let a = solve_assignment(n, &cost);
        check_certificate(n, &cost, &a);
        // primal equals dual objective
        let primal = a.cost(n, &cost);
        let dual: f64 = a.u.iter().sum::<f64>() + a.v.iter().sum::<f64>();
        assert!((primal - dual).abs() < 1e-7);
    }
}
