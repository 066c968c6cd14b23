//! Set-partition enumeration and an independent modularity formula, for
//! verifying community detection against the true optimum on tiny graphs.

/// Undirected weighted modularity of `assignment` over edges given once per
/// unordered pair: `Q = sum_c [ in_c/(2m) - gamma * (tot_c/(2m))^2 ]`.
pub fn modularity(
    node_count: usize,
    undirected_edges: &[(usize, usize, f64)],
    assignment: &[usize],
    gamma: f64,
) -> f64 {
    assert_eq!(assignment.len(), node_count);
    let two_m: f64 = 2.0 * undirected_edges.iter().map(|&(_, _, w)| w).sum::<f64>();
    assert!(two_m > 0.0, "zero-weight graph");

    let communities = assignment.iter().copied().max().unwrap_or(0) + 1;
    let mut internal = vec![0.0; communities];
    let mut degree_sum = vec![0.0; communities];
    for &(u, v, w) in undirected_edges {
        degree_sum[assignment[u]] += w;
        degree_sum[assignment[v]] += w;
        if assignment[u] == assignment[v] {
            internal[assignment[u]] += w;
        }
    }
    (0..communities)
        .map(|c| {
            let tot = degree_sum[c] / two_m;
            2.0 * internal[c] / two_m - gamma * tot * tot
        })
        .sum()
}

/// Every set partition of `n` elements, encoded as restricted growth
/// strings: `assignment[i]` is the block of element `i`, blocks numbered by
/// first appearance. Bell(10) = 115975, so keep `n` small.
pub fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = vec![0usize; n];
    grow(1, n, &mut current, &mut out);
    out
}

fn grow(position: usize, n: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if position == n {
        out.push(current.clone());
        return;
    }
    let max_used = current[..position].iter().copied().max().unwrap_or(0);
    for block in 0..=max_used + 1 {
        current[position] = block;
        grow(position + 1, n, current, out);
    }
    current[position] = 0;
}

/// The partition maximizing modularity, found by brute force over all set
/// partitions. Returns (assignment, Q).
pub fn best_partition(
    node_count: usize,
    undirected_edges: &[(usize, usize, f64)],
    gamma: f64,
) -> (Vec<usize>, f64) {
    let mut best = (vec![0; node_count], f64::NEG_INFINITY);
    for assignment in set_partitions(node_count) {
        let q = modularity(node_count, undirected_edges, &assignment, gamma);
        if q > best.1 {
            best = (assignment, q);
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bell_numbers_small() {
        assert_eq!(set_partitions(1).len(), 1);
        assert_eq!(set_partitions(3).len(), 5);
        assert_eq!(set_partitions(6).len(), 203);
    }

    #[test]
    fn two_triangles_optimum_is_half() {
        let edges = [
            (0, 1, 1.0),
            (1, 2, 1.0),
            (2, 0, 1.0),
            (3, 4, 1.0),
            (4, 5, 1.0),
            (5, 3, 1.0),
        ];
        let (assignment, q) = best_partition(6, &edges, 1.0);
        assert!((q - 0.5).abs() < 1e-12, "q = {q}");
        assert_eq!(assignment[0], assignment[1]);
        assert_eq!(assignment[0], assignment[2]);
        assert_ne!(assignment[0], assignment[3]);
        assert_eq!(assignment[3], assignment[4]);
        assert_eq!(assignment[3], assignment[5]);
    }
}
