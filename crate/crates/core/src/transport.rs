//! Uncapacitated min-cost transshipment on a dense cost matrix.
//!
//! Successive shortest paths with Dijkstra on reduced costs. Every arc
//! between two nodes has unbounded capacity, so each augmentation exhausts a
//! supply or a demand and at most `n` augmentations are needed. The final
//! node potentials form an optimal dual solution.

/// Optimal flows and the dual potentials that certify them.
#[derive(Debug, Clone, PartialEq)]
pub struct TransportSolution {
    pub cost: f64,
    /// `(from, to, amount)` with `amount > 0`.
    pub flows: Vec<(usize, usize, f64)>,
    /// `u` with `u_i - u_j <= cost[i][j]` and `sum_i supply_i u_i = cost`
    /// up to rounding.
    pub duals: Vec<f64>,
}

/// Minimises `sum cost[i][j] f_ij` subject to `out_i - in_i = supply_i`.
///
/// `cost` must be square with nonnegative entries and `supply` must sum to
/// (approximately) zero; leftover imbalance below `1e-14 * sum|supply|` is dropped.
pub fn min_cost_transshipment(cost: &[Vec<f64>], supply: &[f64]) -> TransportSolution {
    let n = supply.len();
    debug_assert!(cost.len() == n && cost.iter().all(|r| r.len() == n));
    let total: f64 = supply.iter().map(|b| b.abs()).sum();
    let eps = 1e-14 * total.max(f64::MIN_POSITIVE);

    let mut excess: Vec<f64> = supply.iter().map(|&b| b.max(0.0)).collect();
    let mut deficit: Vec<f64> = supply.iter().map(|&b| (-b).max(0.0)).collect();
    let mut flow = vec![vec![0.0; n]; n];
    let mut pot = vec![0.0; n];
    // source and sink potentials
    let (mut pot_s, mut pot_t) = (0.0, 0.0);

    let (src, sink) = (n, n + 1);
    loop {
        if excess.iter().all(|&e| e <= eps) || deficit.iter().all(|&d| d <= eps) {
            break;
        }
        // Dijkstra over candidate nodes plus source and sink on reduced costs
        let mut dist = vec![f64::INFINITY; n + 2];
        let mut prev = vec![usize::MAX; n + 2];
        let mut done = vec![false; n + 2];
        dist[src] = 0.0;
        let potential = |v: usize, pot: &[f64], ps: f64, pt: f64| match v {
            v if v == src => ps,
            v if v == sink => pt,
            v => pot[v],
        };
        loop {
            let mut u = usize::MAX;
            let mut best = f64::INFINITY;
            for (v, (&dv, &fin)) in dist.iter().zip(&done).enumerate() {
                if !fin && dv < best {
                    best = dv;
                    u = v;
                }
            }
            if u == usize::MAX {
                break;
            }
            done[u] = true;
            if u == sink {
                continue;
            }
            let pu = potential(u, &pot, pot_s, pot_t);
            let relax = |v: usize, c: f64, dist: &mut Vec<f64>, prev: &mut Vec<usize>| {
                let pv = potential(v, &pot, pot_s, pot_t);
                let nd = dist[u] + (c + pu - pv).max(0.0);
                if nd < dist[v] {
                    dist[v] = nd;
                    prev[v] = u;
                }
            };
            if u == src {
                for v in 0..n {
                    if excess[v] > eps && !done[v] {
                        relax(v, 0.0, &mut dist, &mut prev);
                    }
                }
                continue;
            }
            for v in 0..n {
                if v == u || done[v] {
                    continue;
                }
                // reverse residual arcs are cheaper than forward ones
                let c = if flow[v][u] > 0.0 { -cost[v][u] } else { cost[u][v] };
                relax(v, c, &mut dist, &mut prev);
            }
            if deficit[u] > eps && !done[sink] {
                relax(sink, 0.0, &mut dist, &mut prev);
            }
        }
        if !dist[sink].is_finite() {
            break;
        }
        for v in 0..n {
            if dist[v].is_finite() {
                pot[v] += dist[v];
            }
        }
        pot_s += dist[src];
        pot_t += dist[sink];

        // walk back from the sink to find the path and its bottleneck
        let mut path = vec![sink];
        while *path.last().unwrap() != src {
            path.push(prev[*path.last().unwrap()]);
        }
        path.reverse();
        let first = path[1];
        let last = path[path.len() - 2];
        let mut delta = excess[first].min(deficit[last]);
        for w in path[1..path.len() - 1].windows(2) {
            let (a, b) = (w[0], w[1]);
            if flow[b][a] > 0.0 {
                delta = delta.min(flow[b][a]);
            }
        }
        excess[first] -= delta;
        deficit[last] -= delta;
        for w in path[1..path.len() - 1].windows(2) {
            let (a, b) = (w[0], w[1]);
            if flow[b][a] > 0.0 {
                flow[b][a] -= delta;
                if flow[b][a] <= eps {
                    flow[b][a] = 0.0;
                }
            } else {
                flow[a][b] += delta;
            }
        }
    }

    let mut flows = Vec::new();
    let mut total_cost = 0.0;
    for (i, row) in flow.iter().enumerate() {
        for (j, &f) in row.iter().enumerate() {
            if f > 0.0 {
                flows.push((i, j, f));
                total_cost += f * cost[i][j];
            }
        }
    }
    TransportSolution {
        cost: total_cost,
        flows,
        duals: pot.iter().map(|p| -p).collect(),
    }
}
