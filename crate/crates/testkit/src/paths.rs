//! All-pairs BFS reference for undirected path-length metrics.

use std::collections::VecDeque;

/// Mean shortest-path length over all ordered pairs inside the largest
/// connected component of an undirected graph, by plain BFS from every node.
pub fn average_path_length(node_count: usize, undirected_edges: &[(usize, usize)]) -> f64 {
    let mut adj = vec![Vec::new(); node_count];
    for &(u, v) in undirected_edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    for list in &mut adj {
        list.sort_unstable();
        list.dedup();
    }

    // Component labels.
    let mut component = vec![usize::MAX; node_count];
    let mut sizes = Vec::new();
    for start in 0..node_count {
        if component[start] != usize::MAX {
            continue;
        }
        let label = sizes.len();
        component[start] = label;
        let mut size = 0;
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            size += 1;
            for &v in &adj[u] {
                if component[v] == usize::MAX {
                    component[v] = label;
                    queue.push_back(v);
                }
            }
        }
        sizes.push(size);
    }
    let largest = (0..sizes.len())
        .max_by_key(|&c| (sizes[c], std::cmp::Reverse(c)))
        .expect("graph has nodes");
    let members: Vec<usize> = (0..node_count)
        .filter(|&v| component[v] == largest)
        .collect();
    assert!(members.len() >= 2, "largest component too small");

    let mut total = 0u64;
    let mut pairs = 0u64;
    for &source in &members {
        let mut dist = vec![u64::MAX; node_count];
        dist[source] = 0;
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if dist[v] == u64::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        for &target in &members {
            if target != source {
                total += dist[target];
                pairs += 1;
            }
        }
    }
    total as f64 / pairs as f64
}
