//! Degree-distribution and small-world diagnostics.
//!
//! The clustering coefficient and average path length run on the undirected
//! projection of the graph: directed reachability in a near-acyclic
//! transmission graph would leave most pairs unreachable and the metrics
//! vacuous. The power-law exponent uses the discrete maximum-likelihood
//! estimate with the half-shift approximation,
//! `alpha = 1 + n / sum(ln(x_i / (xmin - 1/2)))`.

use std::collections::BTreeMap;
use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::NarratorGraph;

/// Which degree is bucketed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DegreeDirection {
    In,
    Out,
    /// indegree + outdegree.
    Total,
}

impl DegreeDirection {
    pub fn as_str(self) -> &'static str {
        match self {
            DegreeDirection::In => "in",
            DegreeDirection::Out => "out",
            DegreeDirection::Total => "total",
        }
    }
}

/// Histogram of node degrees: bucket k holds the number of nodes with
/// degree exactly k. Buckets partition the node set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeHistogram {
    pub direction: DegreeDirection,
    pub buckets: BTreeMap<u64, u64>,
}

impl DegreeHistogram {
    pub fn node_count(&self) -> u64 {
        self.buckets.values().sum()
    }
}

/// Exact degree buckets for one direction.
pub fn degree_distribution(graph: &NarratorGraph, direction: DegreeDirection) -> DegreeHistogram {
    let mut buckets = BTreeMap::new();
    for v in 0..graph.node_count() {
        let indeg = graph.in_edges(v).len() as u64;
        let outdeg = graph.out_edges(v).len() as u64;
        let k = match direction {
            DegreeDirection::In => indeg,
            DegreeDirection::Out => outdeg,
            DegreeDirection::Total => indeg + outdeg,
        };
        *buckets.entry(k).or_insert(0) += 1;
    }
    DegreeHistogram { direction, buckets }
}

/// Degrees of every node for one direction, in node order.
pub fn degree_sequence(graph: &NarratorGraph, direction: DegreeDirection) -> Vec<u64> {
    (0..graph.node_count())
        .map(|v| {
            let indeg = graph.in_edges(v).len() as u64;
            let outdeg = graph.out_edges(v).len() as u64;
            match direction {
                DegreeDirection::In => indeg,
                DegreeDirection::Out => outdeg,
                DegreeDirection::Total => indeg + outdeg,
            }
        })
        .collect()
}

/// Maximum-likelihood power-law fit of the tail `x >= xmin`.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerLawFit {
    pub alpha: f64,
    pub xmin: u64,
    /// Number of samples at or above `xmin`.
    pub n_tail: usize,
}

/// Fits the discrete power-law exponent over samples at or above `xmin`.
/// Needs at least two tail samples.
pub fn fit_power_law(degrees: &[u64], xmin: u64) -> Result<PowerLawFit> {
    if xmin < 1 {
        return Err(Error::Domain("xmin must be at least 1".into()));
    }
    let shift = xmin as f64 - 0.5;
    let mut n_tail = 0usize;
    let mut log_sum = 0.0f64;
    for &x in degrees {
        if x >= xmin {
            n_tail += 1;
            log_sum += (x as f64 / shift).ln();
        }
    }
    if n_tail < 2 {
        return Err(Error::Domain(format!(
            "power-law fit needs at least 2 samples >= xmin, got {n_tail}"
        )));
    }
    Ok(PowerLawFit {
        alpha: 1.0 + n_tail as f64 / log_sum,
        xmin,
        n_tail,
    })
}

/// Undirected simple adjacency (neighbor sets), ignoring weights.
fn undirected_neighbors(graph: &NarratorGraph) -> Vec<Vec<usize>> {
    let n = graph.node_count();
    let mut adj = vec![Vec::new(); n];
    for u in 0..n {
        for &(v, _) in graph.out_edges(u) {
            adj[u].push(v);
            adj[v].push(u);
        }
    }
    for list in &mut adj {
        list.sort_unstable();
        list.dedup();
    }
    adj
}

/// Average of local clustering coefficients over all nodes of the
/// undirected projection; nodes with fewer than two neighbors contribute 0
/// and are counted. Returns 0 for the empty graph.
pub fn global_clustering(graph: &NarratorGraph) -> f64 {
    let adj = undirected_neighbors(graph);
    let n = adj.len();
    if n == 0 {
        return 0.0;
    }
    let mut sum = 0.0;
    for u in 0..n {
        let neighbors = &adj[u];
        let k = neighbors.len();
        if k < 2 {
            continue;
        }
        let mut closed = 0u64;
        for i in 0..k {
            for j in (i + 1)..k {
                if adj[neighbors[i]].binary_search(&neighbors[j]).is_ok() {
                    closed += 1;
                }
            }
        }
        sum += 2.0 * closed as f64 / (k as f64 * (k - 1) as f64);
    }
    sum / n as f64
}

/// Mean unweighted shortest-path length over all ordered pairs within the
/// largest connected component of the undirected projection. A largest
/// component smaller than two nodes is a domain error.
pub fn avg_path_length(graph: &NarratorGraph) -> Result<f64> {
    let adj = undirected_neighbors(graph);
    let n = adj.len();
    if n == 0 {
        return Err(Error::Domain(
            "average path length is undefined on an empty graph".into(),
        ));
    }

    // Largest component; ties resolved toward the smallest member handle.
    let mut component = vec![usize::MAX; n];
    let mut sizes = Vec::new();
    for start in 0..n {
        if component[start] != usize::MAX {
            continue;
        }
        let c = sizes.len();
        let mut size = 0usize;
        let mut queue = VecDeque::from([start]);
        component[start] = c;
        while let Some(u) = queue.pop_front() {
            size += 1;
            for &v in &adj[u] {
                if component[v] == usize::MAX {
                    component[v] = c;
                    queue.push_back(v);
                }
            }
        }
        sizes.push(size);
    }
    let largest = (0..sizes.len())
        .max_by_key(|&c| (sizes[c], std::cmp::Reverse(c)))
        .expect("at least one component");
    let members: Vec<usize> = (0..n).filter(|&v| component[v] == largest).collect();
    if members.len() < 2 {
        return Err(Error::Domain(
            "largest component has fewer than 2 nodes".into(),
        ));
    }

    let mut total = 0u64;
    let mut pairs = 0u64;
    let mut dist = vec![u64::MAX; n];
    for &source in &members {
        dist.iter_mut().for_each(|d| *d = u64::MAX);
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
                debug_assert_ne!(dist[target], u64::MAX);
                total += dist[target];
                pairs += 1;
            }
        }
    }
    Ok(total as f64 / pairs as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph_from(edges: &[(&str, &str, u64)]) -> NarratorGraph {
        NarratorGraph::from_parts(
            vec![],
            edges
                .iter()
                .map(|&(s, t, w)| (s.to_string(), t.to_string(), w)),
        )
        .unwrap()
    }

    #[test]
    fn path_of_six_total_degree_histogram() {
        let graph = graph_from(&[
            ("f", "e", 1),
            ("e", "d", 1),
            ("d", "c", 1),
            ("c", "b", 1),
            ("b", "a", 1),
        ]);
        let hist = degree_distribution(&graph, DegreeDirection::Total);
        assert_eq!(hist.buckets, BTreeMap::from([(1, 2), (2, 4)]));
        assert_eq!(hist.node_count(), 6);
    }

    #[test]
    fn star_out_histogram() {
        let graph = graph_from(&[
            ("hub", "l1", 1),
            ("hub", "l2", 1),
            ("hub", "l3", 1),
            ("hub", "l4", 1),
            ("hub", "l5", 1),
        ]);
        let hist = degree_distribution(&graph, DegreeDirection::Out);
        assert_eq!(hist.buckets, BTreeMap::from([(0, 5), (5, 1)]));
    }

    #[test]
    fn empty_graph_histogram_is_empty() {
        let graph = NarratorGraph::from_parts(vec![], vec![]).unwrap();
        let hist = degree_distribution(&graph, DegreeDirection::In);
        assert!(hist.buckets.is_empty());
    }

    #[test]
    fn histogram_partitions_nodes_in_every_direction() {
        let graph = graph_from(&[("a", "b", 2), ("b", "c", 1), ("a", "c", 1), ("d", "a", 1)]);
        for direction in [
            DegreeDirection::In,
            DegreeDirection::Out,
            DegreeDirection::Total,
        ] {
            let hist = degree_distribution(&graph, direction);
            assert_eq!(hist.node_count() as usize, graph.node_count());
        }
    }

    #[test]
    fn all_ones_fit_is_closed_form() {
        let degrees = vec![1u64; 50];
        let fit = fit_power_law(&degrees, 1).unwrap();
        let expected = 1.0 + 1.0 / 2.0f64.ln();
        assert!(
            (fit.alpha - expected).abs() < 1e-12,
            "alpha = {}",
            fit.alpha
        );
        assert_eq!(fit.n_tail, 50);
    }

    #[test]
    fn tail_smaller_than_two_is_domain_error() {
        assert!(fit_power_law(&[5], 1).is_err());
        assert!(fit_power_law(&[1, 1, 9], 5).is_err());
        assert!(fit_power_law(&[], 1).is_err());
    }

    #[test]
    fn fit_ignores_values_below_xmin() {
        let fit = fit_power_law(&[1, 1, 1, 4, 8], 4).unwrap();
        assert_eq!(fit.n_tail, 2);
        let expected = 1.0 + 2.0 / ((4.0f64 / 3.5).ln() + (8.0f64 / 3.5).ln());
        assert!((fit.alpha - expected).abs() < 1e-12);
    }

    #[test]
    fn clustering_of_triangle_is_one() {
        let graph = graph_from(&[("a", "b", 1), ("b", "c", 1), ("c", "a", 1)]);
        assert_eq!(global_clustering(&graph), 1.0);
    }

    #[test]
    fn clustering_of_path_is_zero() {
        let graph = graph_from(&[("a", "b", 1), ("b", "c", 1)]);
        assert_eq!(global_clustering(&graph), 0.0);
    }

    #[test]
    fn clustering_triangle_with_pendant() {
        // Local coefficients: two triangle corners 1, the attachment 1/3,
        // the pendant 0; average 7/12.
        let graph = graph_from(&[("a", "b", 1), ("b", "c", 1), ("c", "a", 1), ("a", "d", 1)]);
        let c = global_clustering(&graph);
        assert!((c - 7.0 / 12.0).abs() < 1e-12, "c = {c}");
    }

    #[test]
    fn clustering_counts_reciprocal_edges_once() {
        // a<->b plus triangle closure; the undirected projection is a triangle.
        let graph = graph_from(&[("a", "b", 1), ("b", "a", 1), ("b", "c", 1), ("c", "a", 1)]);
        assert_eq!(global_clustering(&graph), 1.0);
    }

    #[test]
    fn avg_path_of_three_path_is_four_thirds() {
        let graph = graph_from(&[("a", "b", 1), ("b", "c", 1)]);
        let l = avg_path_length(&graph).unwrap();
        assert!((l - 4.0 / 3.0).abs() < 1e-12, "l = {l}");
    }

    #[test]
    fn avg_path_of_complete_graph_is_one() {
        let graph = graph_from(&[
            ("a", "b", 1),
            ("a", "c", 1),
            ("a", "d", 1),
            ("b", "c", 1),
            ("b", "d", 1),
            ("c", "d", 1),
        ]);
        assert_eq!(avg_path_length(&graph).unwrap(), 1.0);
    }

    #[test]
    fn avg_path_uses_largest_component() {
        // Component {a,b,c} as a path, plus isolated pair impossible to reach.
        let graph = graph_from(&[("a", "b", 1), ("b", "c", 1), ("x", "y", 1)]);
        let l = avg_path_length(&graph).unwrap();
        assert!((l - 4.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn avg_path_on_isolated_nodes_is_domain_error() {
        let graph =
            NarratorGraph::from_parts(vec!["a".to_string(), "b".to_string()], vec![]).unwrap();
        assert!(matches!(avg_path_length(&graph), Err(Error::Domain(_))));
    }
}
