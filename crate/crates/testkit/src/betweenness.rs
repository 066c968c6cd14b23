//! Exhaustive betweenness reference: literally enumerate every shortest
//! path. Only usable on small graphs.

use std::collections::VecDeque;

use crate::EdgeListGraph;

/// Betweenness by explicit shortest-path enumeration: for every ordered
/// pair (s, t) all shortest paths are walked, and each interior node of each
/// path is credited with `1 / (number of shortest s-t paths)`.
pub fn exhaustive_betweenness(graph: &EdgeListGraph) -> Vec<f64> {
    let n = graph.node_count;
    let adj = graph.out_adjacency();
    let mut scores = vec![0.0f64; n];

    for source in 0..n {
        // BFS distances from source.
        let mut dist = vec![usize::MAX; n];
        dist[source] = 0;
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            for &(v, _) in &adj[u] {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }

        for target in 0..n {
            if target == source || dist[target] == usize::MAX {
                continue;
            }
            let paths = enumerate_shortest_paths(&adj, &dist, source, target);
            let sigma = paths.len() as f64;
            for path in &paths {
                for &v in &path[1..path.len() - 1] {
                    scores[v] += 1.0 / sigma;
                }
            }
        }
    }
    scores
}

/// All shortest paths from `source` to `target`, as node sequences, found by
/// depth-first walking edges that step one BFS level forward.
fn enumerate_shortest_paths(
    adj: &[Vec<(usize, u64)>],
    dist: &[usize],
    source: usize,
    target: usize,
) -> Vec<Vec<usize>> {
    let mut paths = Vec::new();
    let mut current = vec![source];
    walk(adj, dist, target, &mut current, &mut paths);
    paths
}

fn walk(
    adj: &[Vec<(usize, u64)>],
    dist: &[usize],
    target: usize,
    current: &mut Vec<usize>,
    paths: &mut Vec<Vec<usize>>,
) {
    let here = *current.last().expect("path never empty");
    if here == target {
        paths.push(current.clone());
        return;
    }
    for &(next, _) in &adj[here] {
        if dist[next] == dist[here] + 1 && dist[next] <= dist[target] {
            current.push(next);
            walk(adj, dist, target, current, paths);
            current.pop();
        }
    }
}
