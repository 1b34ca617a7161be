//! Exact transportation simplex for general (non-uniform) marginals.
//!
//! Classic tree-basis network simplex on the dense bipartite transportation
//! polytope: northwest-corner start, Bland's entering rule (first negative
//! reduced cost in row-major order, which precludes cycling), and a
//! deterministic leaving-arc rule. Suited to the desk-scale instances this
//! crate works with; the uniform equal-size case is routed to the
//! assignment solver instead.

use std::collections::BTreeMap;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum SimplexError {
    /// Supplies and demands must both be positive and sum to the same
    /// total.
    #[error("unbalanced problem: total supply {supply} vs total demand {demand}")]
    Unbalanced { supply: f64, demand: f64 },
    /// Iteration safety cap; not expected on real instances.
    #[error("simplex failed to converge within {0} pivots")]
    Stalled(usize),
}

/// Optimal flows and duals of a transportation problem.
#[derive(Debug, Clone)]
pub struct Transportation {
    /// Positive optimal flows as (source, sink, mass).
    pub flows: Vec<(usize, usize, f64)>,
    /// Source potentials.
    pub u: Vec<f64>,
    /// Sink potentials.
    pub v: Vec<f64>,
    /// Optimal cost.
    pub cost: f64,
}

const REDUCED_COST_TOL: f64 = 1e-11;

/// Solves `min Σ c[i][j] f[i][j]` over nonnegative flows with the given row
/// and column sums. `cost` is row-major `n × m`.
pub fn solve_transportation(
    supply: &[f64],
    demand: &[f64],
    cost: &[f64],
) -> Result<Transportation, SimplexError> {
    let n = supply.len();
    let m = demand.len();
    assert!(n > 0 && m > 0, "empty marginals");
    assert_eq!(cost.len(), n * m, "cost matrix must be n×m row-major");
    let total_s: f64 = supply.iter().sum();
    let total_d: f64 = demand.iter().sum();
    if (total_s - total_d).abs() > 1e-9 * total_s.abs().max(1.0) {
        return Err(SimplexError::Unbalanced { supply: total_s, demand: total_d });
    }
    // absorb the rounding difference into the last demand
    let mut demand = demand.to_vec();
    let last = m - 1;
    demand[last] += total_s - total_d;

    // Northwest-corner initial basis: always n + m − 1 cells, some possibly
    // carrying zero flow when a row and a column close simultaneously.
    let mut basis: Vec<(usize, usize)> = Vec::with_capacity(n + m - 1);
    let mut flow: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    {
        let mut rem_s = supply.to_vec();
        let mut rem_d = demand.clone();
        let (mut i, mut j) = (0, 0);
        loop {
            let q = rem_s[i].min(rem_d[j]);
            basis.push((i, j));
            flow.insert((i, j), q);
            rem_s[i] -= q;
            rem_d[j] -= q;
            if i == n - 1 && j == m - 1 {
                break;
            }
            // move down when the row is exhausted, right otherwise; the
            // tie rule keeps the basis a spanning tree
            if rem_s[i] <= rem_d[j] && i < n - 1 {
                i += 1;
            } else {
                j += 1;
            }
        }
    }
    debug_assert_eq!(basis.len(), n + m - 1);

    // node ids: sources 0..n, sinks n..n+m
    let nodes = n + m;
    let max_pivots = 1000 * (n + m) * (n + m) + 10_000;
    let mut pivots = 0;
    let (u, v) = loop {
        // duals from the tree: u[0] = 0, propagate over basis arcs
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nodes]; // (neighbor, arc idx)
        for (idx, &(i, j)) in basis.iter().enumerate() {
            adj[i].push((n + j, idx));
            adj[n + j].push((i, idx));
        }
        let mut pot = vec![f64::NAN; nodes];
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; nodes]; // (parent node, arc idx)
        pot[0] = 0.0;
        let mut stack = vec![0usize];
        while let Some(node) = stack.pop() {
            for &(next, arc) in &adj[node] {
                if pot[next].is_nan() {
                    let (i, j) = basis[arc];
                    // u[i] + v[j] = c[i][j] on basis arcs
                    pot[next] = cost[i * m + j] - pot[node];
                    parent[next] = Some((node, arc));
                    stack.push(next);
                }
            }
        }
        debug_assert!(pot.iter().all(|p| !p.is_nan()), "basis must span all nodes");
        let u: Vec<f64> = pot[..n].to_vec();
        let v: Vec<f64> = pot[n..].to_vec();

        // Bland's rule: first arc with negative reduced cost
        let mut entering = None;
        'search: for i in 0..n {
            for j in 0..m {
                if cost[i * m + j] - u[i] - v[j] < -REDUCED_COST_TOL {
                    entering = Some((i, j));
                    break 'search;
                }
            }
        }
        let Some((ei, ej)) = entering else {
            break (u, v);
        };
        pivots += 1;
        if pivots > max_pivots {
            return Err(SimplexError::Stalled(max_pivots));
        }

        // cycle: tree path from source ei to sink n+ej, plus the entering arc
        let path = |from: usize, parent: &[Option<(usize, usize)>]| -> Vec<usize> {
            let mut arcs = Vec::new();
            let mut node = from;
            while let Some((p, arc)) = parent[node] {
                arcs.push(arc);
                node = p;
            }
            arcs
        };
        let up_a = path(ei, &parent);
        let up_b = path(n + ej, &parent);
        // strip the common suffix toward the root
        let mut la = up_a.len();
        let mut lb = up_b.len();
        while la > 0 && lb > 0 && up_a[la - 1] == up_b[lb - 1] {
            la -= 1;
            lb -= 1;
        }
        // The entering arc gains θ; walking away from either of its
        // endpoints, cycle arcs alternate sign, and the alternation is
        // tracked by the type of the node an arc is entered from: on the
        // source-side walk an arc entered from a source loses flow, on the
        // sink-side walk an arc entered from a sink loses flow.
        let mut cycle: Vec<(usize, bool)> = Vec::new(); // (arc idx, decreases)
        {
            let mut node = ei;
            for &arc in up_a.iter().take(la) {
                let (i, j) = basis[arc];
                cycle.push((arc, node < n));
                node = if node == i { n + j } else { i };
            }
            let mut node = n + ej;
            for &arc in up_b.iter().take(lb) {
                let (i, j) = basis[arc];
                cycle.push((arc, node >= n));
                node = if node == i { n + j } else { i };
            }
        }

        // theta = min flow over decreasing arcs; first minimiser leaves
        let mut theta = f64::INFINITY;
        let mut leaving = None;
        for &(arc, dec) in &cycle {
            if dec {
                let f = flow[&basis[arc]];
                if f < theta {
                    theta = f;
                    leaving = Some(arc);
                }
            }
        }
        let leaving = leaving.expect("cycle has a decreasing arc");

        *flow.entry((ei, ej)).or_insert(0.0) += theta;
        for &(arc, dec) in &cycle {
            let e = flow.get_mut(&basis[arc]).expect("basis flow");
            if dec {
                *e -= theta;
            } else {
                *e += theta;
            }
        }
        let old = basis[leaving];
        flow.remove(&old);
        basis[leaving] = (ei, ej);
    };

    let mut out = Vec::new();
    let mut total = 0.0;
    for (&(i, j), &f) in &flow {
        if f > 1e-15 {
            total += f * cost[i * m + j];
            out.push((i, j, f));
        }
    }
    Ok(Transportation { flows: out, u, v, cost: total })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn check_solution(
        supply: &[f64],
        demand: &[f64],
        cost: &[f64],
        t: &Transportation,
        expected_cost: Option<f64>,
    ) {
        let (n, m) = (supply.len(), demand.len());
        let mut row = vec![0.0; n];
        let mut col = vec![0.0; m];
        for &(i, j, f) in &t.flows {
            assert!(f > 0.0);
            row[i] += f;
            col[j] += f;
        }
        for i in 0..n {
            assert!((row[i] - supply[i]).abs() < 1e-9, "row marginal {i}");
        }
        for j in 0..m {
            assert!((col[j] - demand[j]).abs() < 1e-9, "col marginal {j}");
        }
        // dual feasibility + complementary slackness
        for i in 0..n {
            for j in 0..m {
                assert!(t.u[i] + t.v[j] <= cost[i * m + j] + 1e-7);
            }
        }
        for &(i, j, _) in &t.flows {
            assert!((t.u[i] + t.v[j] - cost[i * m + j]).abs() < 1e-7);
        }
        // strong duality
        let dual: f64 = t.u.iter().zip(supply).map(|(u, s)| u * s).sum::<f64>()
            + t.v.iter().zip(demand).map(|(v, d)| v * d).sum::<f64>();
        assert!((dual - t.cost).abs() < 1e-7, "dual {dual} vs primal {}", t.cost);
        if let Some(c) = expected_cost {
            assert!((t.cost - c).abs() < 1e-9, "cost {} vs expected {c}", t.cost);
        }
    }

    #[test]
    fn two_by_two_picks_cheaper_matching() {
        let supply = [0.5, 0.5];
        let demand = [0.5, 0.5];
        let cost = [0.0, 1.0, 1.0, 0.0];
        let t = solve_transportation(&supply, &demand, &cost).unwrap();
        check_solution(&supply, &demand, &cost, &t, Some(0.0));
        let cost = [1.0, 0.0, 0.0, 1.0];
        let t = solve_transportation(&supply, &demand, &cost).unwrap();
        check_solution(&supply, &demand, &cost, &t, Some(0.0));
    }

    #[test]
    fn dirac_to_cloud() {
        let supply = [1.0];
        let demand = [0.25, 0.25, 0.5];
        let cost = [3.0, 1.0, 2.0];
        let t = solve_transportation(&supply, &demand, &cost).unwrap();
        check_solution(&supply, &demand, &cost, &t, Some(0.25 * 3.0 + 0.25 * 1.0 + 0.5 * 2.0));
    }

    #[test]
    fn rejects_unbalanced() {
        assert!(matches!(
            solve_transportation(&[1.0], &[0.6], &[1.0]),
            Err(SimplexError::Unbalanced { .. })
        ));
    }

    #[test]
    fn agrees_with_assignment_solver_on_uniform_instances() {
        let mut rng = crate::sample::rng_for(43, 0);
        for n in [3usize, 6, 12] {
            for _ in 0..20 {
                let cost: Vec<f64> = (0..n * n).map(|_| rng.random_range(0.0..5.0)).collect();
                let w = vec![1.0 / n as f64; n];
                let t = solve_transportation(&w, &w, &cost).unwrap();
                check_solution(&w, &w, &cost, &t, None);
                let a = crate::transport::assignment::solve_assignment(n, &cost);
                let assignment_cost = a.cost(n, &cost) / n as f64;
                assert!(
                    (t.cost - assignment_cost).abs() < 1e-9,
                    "simplex {} vs assignment {assignment_cost}",
                    t.cost
                );
            }
        }
    }

    #[test]
    fn random_nonuniform_instances_satisfy_certificates() {
        let mut rng = crate::sample::rng_for(44, 0);
        for _ in 0..30 {
            let n = rng.random_range(2..8);
            let m = rng.random_range(2..8);
            let mut supply: Vec<f64> = (0..n).map(|_| rng.random_range(0.1..1.0)).collect();
            let mut demand: Vec<f64> = (0..m).map(|_| rng.random_range(0.1..1.0)).collect();
            let st: f64 = supply.iter().sum();
            let dt: f64 = demand.iter().sum();
            supply.iter_mut().for_each(|x| *x /= st);
            demand.iter_mut().for_each(|x| *x /= dt);
            let cost: Vec<f64> = (0..n * m).map(|_| rng.random_range(0.0..4.0)).collect();
            let t = solve_transportation(&supply, &demand, &cost).unwrap();
            check_solution(&supply, &demand, &cost, &t, None);
        }
    }
}
