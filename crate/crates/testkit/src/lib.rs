//! Reference implementations and seeded generators backing the test suites.
//!
//! Everything here is written the slow, obvious way and shares no code with
//! `isnad-core`: graphs are plain edge lists over integer node indices.
//! Disagreement between these functions and the production implementations
//! means one of the two is wrong.

pub mod betweenness;
pub mod generators;
pub mod pagerank;
pub mod partitions;
pub mod paths;
pub mod powerlaw;

/// A directed graph as raw parts: node count plus (source, target, weight)
/// edges without duplicates.
#[derive(Debug, Clone)]
pub struct EdgeListGraph {
    pub node_count: usize,
    pub edges: Vec<(usize, usize, u64)>,
}

impl EdgeListGraph {
    /// Outgoing (target, weight) pairs per node.
    pub fn out_adjacency(&self) -> Vec<Vec<(usize, u64)>> {
        let mut adj = vec![Vec::new(); self.node_count];
        for &(s, t, w) in &self.edges {
            adj[s].push((t, w));
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }
}
