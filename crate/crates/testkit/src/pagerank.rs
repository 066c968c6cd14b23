//! Dense-matrix PageRank reference.

use crate::EdgeListGraph;

/// Power iteration on the explicit N x N transition matrix
/// `M[v][u] = w(u,v) / W_out(u)` (uniform `1/N` column for dangling `u`),
/// iterated as `x' = (1-d)/N + d * M x` until the L1 change drops below
/// `tolerance`.
pub fn dense_pagerank(
    graph: &EdgeListGraph,
    damping: f64,
    use_edge_weights: bool,
    tolerance: f64,
    max_iterations: usize,
) -> Vec<f64> {
    let n = graph.node_count;
    assert!(n > 0, "reference pagerank needs nodes");
    let nf = n as f64;

    let mut out_mass = vec![0.0f64; n];
    for &(s, _, w) in &graph.edges {
        out_mass[s] += if use_edge_weights { w as f64 } else { 1.0 };
    }

    // Column-stochastic matrix; matrix[v][u] is the share of u's rank that
    // flows to v.
    let mut matrix = vec![vec![0.0f64; n]; n];
    for u in 0..n {
        if out_mass[u] == 0.0 {
            for row in matrix.iter_mut() {
                row[u] = 1.0 / nf;
            }
        }
    }
    for &(s, t, w) in &graph.edges {
        let share = if use_edge_weights { w as f64 } else { 1.0 };
        matrix[t][s] += share / out_mass[s];
    }

    let mut x = vec![1.0 / nf; n];
    for _ in 0..max_iterations {
        let mut next = vec![(1.0 - damping) / nf; n];
        for v in 0..n {
            let mut acc = 0.0;
            for u in 0..n {
                acc += matrix[v][u] * x[u];
            }
            next[v] += damping * acc;
        }
        let change: f64 = x.iter().zip(next.iter()).map(|(a, b)| (a - b).abs()).sum();
        x = next;
        if change < tolerance {
            break;
        }
    }
    x
}
