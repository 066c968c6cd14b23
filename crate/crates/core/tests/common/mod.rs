//! Shared helpers for the integration suites.
#![allow(dead_code)] // each test binary uses a different subset

use isnad_core::graph::NarratorGraph;
use isnad_testkit::EdgeListGraph;

/// Zero-padded id so lexicographic node order matches the numeric index;
/// graph handle i is then testkit node i.
pub fn node_id(i: usize) -> String {
    format!("n{i:03}")
}

/// Lifts a testkit edge-list graph into a `NarratorGraph`.
pub fn narrator_graph(edge_list: &EdgeListGraph) -> NarratorGraph {
    assert!(edge_list.node_count <= 1000, "ids are padded to 3 digits");
    NarratorGraph::from_parts(
        (0..edge_list.node_count).map(node_id),
        edge_list
            .edges
            .iter()
            .map(|&(s, t, w)| (node_id(s), node_id(t), w)),
    )
    .expect("generator produces valid graphs")
}

/// Undirected weighted pair list (u < v) from a directed edge list, for the
/// reference modularity.
pub fn undirected_pairs(edge_list: &EdgeListGraph) -> Vec<(usize, usize, f64)> {
    let mut pairs = std::collections::BTreeMap::new();
    for &(s, t, w) in &edge_list.edges {
        let key = if s < t { (s, t) } else { (t, s) };
        *pairs.entry(key).or_insert(0.0) += w as f64;
    }
    pairs.into_iter().map(|((u, v), w)| (u, v, w)).collect()
}
