//! Louvain community detection with explicit modularity computation.
//!
//! The directed narrator graph is symmetrized first (undirected weight is the
//! sum of both directions) because modularity and the Louvain method are
//! defined on undirected graphs. The node-visit order inside local moving is
//! a seeded shuffle: the algorithm is order-sensitive, and a fixed seed makes
//! partitions reproducible.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::NarratorGraph;

/// Undirected weighted view of a narrator graph.
#[derive(Debug, Clone)]
pub struct UndirectedGraph {
    node_ids: Vec<String>,
    /// Symmetric adjacency; no self-loops at this level.
    adj: Vec<Vec<(usize, f64)>>,
    /// Sum of all weighted degrees (2m).
    total_degree: f64,
}

impl UndirectedGraph {
    pub fn node_count(&self) -> usize {
        self.node_ids.len()
    }

    pub fn node_ids(&self) -> &[String] {
        &self.node_ids
    }

    /// Neighbors with summed weights, ascending by handle.
    pub fn neighbors(&self, handle: usize) -> &[(usize, f64)] {
        &self.adj[handle]
    }

    pub fn degree(&self, handle: usize) -> f64 {
        self.adj[handle].iter().map(|&(_, w)| w).sum()
    }

    /// 2m: the total of all weighted degrees.
    pub fn total_degree(&self) -> f64 {
        self.total_degree
    }

    pub fn weight(&self, u: usize, v: usize) -> f64 {
        self.adj[u]
            .binary_search_by_key(&v, |&(n, _)| n)
            .map(|i| self.adj[u][i].1)
            .unwrap_or(0.0)
    }
}

/// Collapses edge direction: undirected weight(u,v) = w(u->v) + w(v->u).
pub fn symmetrize(graph: &NarratorGraph) -> UndirectedGraph {
    let n = graph.node_count();
    let mut pair_weights: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    for u in 0..n {
        for &(v, w) in graph.out_edges(u) {
            let key = if u < v { (u, v) } else { (v, u) };
            *pair_weights.entry(key).or_insert(0.0) += w as f64;
        }
    }
    let mut adj = vec![Vec::new(); n];
    let mut total_degree = 0.0;
    for (&(u, v), &w) in &pair_weights {
        adj[u].push((v, w));
        adj[v].push((u, w));
        total_degree += 2.0 * w;
    }
    for list in &mut adj {
        list.sort_unstable_by_key(|&(v, _)| v);
    }
    UndirectedGraph {
        node_ids: graph.node_ids().to_vec(),
        adj,
        total_degree,
    }
}

/// Newman modularity of an assignment at resolution `gamma`:
/// `Q = sum over communities of [ in(c)/(2m) - gamma * (tot(c)/(2m))^2 ]`
/// where `in(c)` is twice the internal weight and `tot(c)` the summed degree.
pub fn modularity(
    graph: &UndirectedGraph,
    assignment: &BTreeMap<String, usize>,
    gamma: f64,
) -> Result<f64> {
    let two_m = graph.total_degree();
    if two_m <= 0.0 {
        return Err(Error::Domain(
            "modularity is undefined on a graph with zero total weight".into(),
        ));
    }
    let mut handle_comm = vec![0usize; graph.node_count()];
    for (handle, id) in graph.node_ids().iter().enumerate() {
        let comm = assignment
            .get(id)
            .ok_or_else(|| Error::Validation(format!("assignment missing node {id:?}")))?;
        handle_comm[handle] = *comm;
    }

    // Keyed by community id; ids need not be dense.
    let mut sigma_in: BTreeMap<usize, f64> = BTreeMap::new();
    let mut sigma_tot: BTreeMap<usize, f64> = BTreeMap::new();
    for u in 0..graph.node_count() {
        *sigma_tot.entry(handle_comm[u]).or_insert(0.0) += graph.degree(u);
        for &(v, w) in graph.neighbors(u) {
            if handle_comm[u] == handle_comm[v] {
                // Each internal undirected edge is visited from both ends,
                // which is exactly the "twice the internal weight" term.
                *sigma_in.entry(handle_comm[u]).or_insert(0.0) += w;
            }
        }
    }

    let mut q = 0.0;
    for (&community, &tot_sum) in &sigma_tot {
        let tot = tot_sum / two_m;
        q += sigma_in.get(&community).copied().unwrap_or(0.0) / two_m - gamma * tot * tot;
    }
    Ok(q)
}

/// Louvain parameters.
#[derive(Debug, Clone, Copy)]
pub struct LouvainConfig {
    /// Resolution gamma; larger values favor more, smaller communities.
    pub resolution: f64,
    /// Seed for the node-visit shuffle.
    pub seed: u64,
    /// A move must gain at least this much modularity to be made.
    pub min_gain: f64,
}

impl Default for LouvainConfig {
    fn default() -> Self {
        LouvainConfig {
            resolution: 1.0,
            seed: 42,
            min_gain: 1e-7,
        }
    }
}

/// Node-to-community assignment with its modularity.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    /// Community ids are dense integers from 0, numbered by first appearance
    /// in node order.
    pub assignment: BTreeMap<String, usize>,
    pub modularity: f64,
    pub community_count: usize,
}

impl Partition {
    pub fn community_of(&self, id: &str) -> Option<usize> {
        self.assignment.get(id).copied()
    }

    /// Members of each community, ids sorted within each.
    pub fn communities(&self) -> Vec<Vec<String>> {
        let mut out = vec![Vec::new(); self.community_count];
        for (id, &c) in &self.assignment {
            out[c].push(id.clone());
        }
        out
    }
}

/// Aggregated working graph for one Louvain level.
struct WorkGraph {
    /// Neighbors excluding self-loops, ascending by index.
    adj: Vec<Vec<(usize, f64)>>,
    /// Self-loop weight per node (internal weight of the collapsed group).
    self_loop: Vec<f64>,
    /// Weighted degree including twice the self-loop.
    degree: Vec<f64>,
    /// 2m; invariant across aggregation levels.
    total: f64,
}

impl WorkGraph {
    fn node_count(&self) -> usize {
        self.adj.len()
    }

    fn from_undirected(graph: &UndirectedGraph) -> Self {
        let n = graph.node_count();
        let adj: Vec<Vec<(usize, f64)>> = (0..n).map(|u| graph.neighbors(u).to_vec()).collect();
        let degree: Vec<f64> = (0..n).map(|u| graph.degree(u)).collect();
        WorkGraph {
            adj,
            self_loop: vec![0.0; n],
            degree,
            total: graph.total_degree(),
        }
    }

    /// Collapses communities into super-nodes; preserves `total`.
    fn aggregate(&self, node_comm: &[usize]) -> (WorkGraph, Vec<usize>) {
        let mut ids: Vec<usize> = node_comm.to_vec();
        ids.sort_unstable();
        ids.dedup();
        let dense: BTreeMap<usize, usize> = ids.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let m = ids.len();

        let mut pair: BTreeMap<(usize, usize), f64> = BTreeMap::new();
        let mut self_loop = vec![0.0; m];
        for u in 0..self.node_count() {
            let cu = dense[&node_comm[u]];
            self_loop[cu] += self.self_loop[u];
            for &(v, w) in &self.adj[u] {
                if v < u {
                    continue; // each undirected edge once
                }
                let cv = dense[&node_comm[v]];
                if cu == cv {
                    self_loop[cu] += w;
                } else {
                    let key = if cu < cv { (cu, cv) } else { (cv, cu) };
                    *pair.entry(key).or_insert(0.0) += w;
                }
            }
        }
        let mut adj = vec![Vec::new(); m];
        for (&(a, b), &w) in &pair {
            adj[a].push((b, w));
            adj[b].push((a, w));
        }
        for list in &mut adj {
            list.sort_unstable_by_key(|&(v, _)| v);
        }
        let degree: Vec<f64> = (0..m)
            .map(|c| adj[c].iter().map(|&(_, w)| w).sum::<f64>() + 2.0 * self_loop[c])
            .collect();
        let remap: Vec<usize> = node_comm.iter().map(|c| dense[c]).collect();
        (
            WorkGraph {
                adj,
                self_loop,
                degree,
                total: self.total,
            },
            remap,
        )
    }
}

/// One phase of local moving. Visits nodes in a seeded shuffle, moving each
/// to the neighboring community with the largest gain when that gain is at
/// least `min_gain` (ties go to the lowest community id). Sweeps repeat until
/// a full sweep makes no move. Returns whether anything moved.
fn local_move(
    work: &WorkGraph,
    node_comm: &mut [usize],
    gamma: f64,
    min_gain: f64,
    rng: &mut ChaCha8Rng,
) -> bool {
    let n = work.node_count();
    let two_m = work.total;
    let inv_t = 2.0 / two_m;
    let inv_t2 = 2.0 * gamma / (two_m * two_m);

    let mut comm_degree: BTreeMap<usize, f64> = BTreeMap::new();
    for (node, &c) in node_comm.iter().enumerate() {
        *comm_degree.entry(c).or_insert(0.0) += work.degree[node];
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);

    let mut moved_any = false;
    loop {
        let mut moves_this_sweep = 0usize;
        for &node in &order {
            let current = node_comm[node];
            let k = work.degree[node];

            let mut neighbor_weights: BTreeMap<usize, f64> = BTreeMap::new();
            for &(nbr, w) in &work.adj[node] {
                *neighbor_weights.entry(node_comm[nbr]).or_insert(0.0) += w;
            }

            // Detach the node so community totals exclude it.
            *comm_degree.get_mut(&current).expect("community tracked") -= k;
            let w_current = neighbor_weights.get(&current).copied().unwrap_or(0.0);
            let removal_cost = -w_current * inv_t + comm_degree[&current] * k * inv_t2;

            let mut best = current;
            let mut best_gain = 0.0;
            for (&candidate, &w_cand) in &neighbor_weights {
                if candidate == current {
                    continue;
                }
                let gain = removal_cost + w_cand * inv_t - comm_degree[&candidate] * k * inv_t2;
                if gain > best_gain {
                    best_gain = gain;
                    best = candidate;
                }
            }

            if best != current && best_gain >= min_gain {
                node_comm[node] = best;
                *comm_degree.get_mut(&best).expect("candidate tracked") += k;
                moves_this_sweep += 1;
            } else {
                *comm_degree.get_mut(&current).expect("community tracked") += k;
            }
        }
        if moves_this_sweep == 0 {
            break;
        }
        moved_any = true;
    }
    moved_any
}

/// Louvain on the symmetrized graph.
///
/// Alternates local moving and aggregation until no level improves, then
/// restarts the whole cycle from the flattened assignment; the final pass
/// ending with zero moves certifies that no single-node move on the original
/// graph gains `min_gain` or more.
pub fn louvain(graph: &NarratorGraph, config: &LouvainConfig) -> Result<Partition> {
    if graph.node_count() == 0 {
        return Err(Error::Domain("louvain needs a non-empty graph".into()));
    }
    if graph.edge_count() == 0 {
        return Err(Error::Domain("louvain needs at least one edge".into()));
    }
    if !config.resolution.is_finite() || config.resolution <= 0.0 {
        return Err(Error::Domain(format!(
            "resolution {} must be positive",
            config.resolution
        )));
    }
    if !config.min_gain.is_finite() || config.min_gain <= 0.0 {
        return Err(Error::Domain("min_gain must be positive".into()));
    }

    let undirected = symmetrize(graph);
    let base = WorkGraph::from_undirected(&undirected);
    let n = base.node_count();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

    // assignment[v] = community of original node v, by original handle.
    let mut assignment: Vec<usize> = (0..n).collect();

    loop {
        let moved_base = local_move(
            &base,
            &mut assignment,
            config.resolution,
            config.min_gain,
            &mut rng,
        );

        // Multi-level coarsening on top of the current assignment;
        // to_coarse maps each original node to its current super-node.
        let mut moved_deeper = false;
        let (mut work, mut to_coarse) = base.aggregate(&assignment);
        loop {
            let mut coarse_comm: Vec<usize> = (0..work.node_count()).collect();
            let moved = local_move(
                &work,
                &mut coarse_comm,
                config.resolution,
                config.min_gain,
                &mut rng,
            );
            if !moved {
                break;
            }
            moved_deeper = true;
            let (next, next_remap) = work.aggregate(&coarse_comm);
            to_coarse = to_coarse.iter().map(|&c| next_remap[c]).collect();
            work = next;
        }
        if moved_deeper {
            assignment = to_coarse;
        }

        if !moved_base && !moved_deeper {
            break;
        }
    }

    // Dense community ids by first appearance in node order.
    let mut dense: BTreeMap<usize, usize> = BTreeMap::new();
    let mut labeled = BTreeMap::new();
    for (handle, id) in undirected.node_ids().iter().enumerate() {
        let next = dense.len();
        let comm = *dense.entry(assignment[handle]).or_insert(next);
        labeled.insert(id.clone(), comm);
    }
    let community_count = dense.len();
    let q = modularity(&undirected, &labeled, config.resolution)?;
    Ok(Partition {
        assignment: labeled,
        modularity: q,
        community_count,
    })
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

    fn two_triangles() -> NarratorGraph {
        graph_from(&[
            ("a", "b", 1),
            ("b", "c", 1),
            ("c", "a", 1),
            ("x", "y", 1),
            ("y", "z", 1),
            ("z", "x", 1),
        ])
    }

    #[test]
    fn symmetrize_sums_both_directions() {
        let graph = graph_from(&[("a", "b", 2), ("b", "a", 3)]);
        let und = symmetrize(&graph);
        let a = und.node_ids().iter().position(|i| i == "a").unwrap();
        let b = und.node_ids().iter().position(|i| i == "b").unwrap();
        assert_eq!(und.weight(a, b), 5.0);
        assert_eq!(und.weight(b, a), 5.0);
        assert_eq!(und.total_degree(), 10.0);
    }

    #[test]
    fn symmetrize_single_edge_keeps_weight() {
        let graph = graph_from(&[("a", "b", 1)]);
        let und = symmetrize(&graph);
        assert_eq!(und.weight(0, 1), 1.0);
    }

    #[test]
    fn modularity_of_two_triangle_partition_is_half() {
        let und = symmetrize(&two_triangles());
        let mut assignment = BTreeMap::new();
        for id in ["a", "b", "c"] {
            assignment.insert(id.to_string(), 0);
        }
        for id in ["x", "y", "z"] {
            assignment.insert(id.to_string(), 1);
        }
        let q = modularity(&und, &assignment, 1.0).unwrap();
        assert!((q - 0.5).abs() < 1e-12, "q = {q}");
    }

    #[test]
    fn modularity_of_single_community_is_zero() {
        let und = symmetrize(&graph_from(&[("a", "b", 1), ("b", "c", 2), ("c", "a", 1)]));
        let assignment: BTreeMap<String, usize> =
            und.node_ids().iter().map(|id| (id.clone(), 0)).collect();
        let q = modularity(&und, &assignment, 1.0).unwrap();
        assert!(q.abs() < 1e-12, "q = {q}");
    }

    #[test]
    fn modularity_of_singletons_is_negative() {
        let und = symmetrize(&graph_from(&[("a", "b", 1), ("b", "c", 1)]));
        let assignment: BTreeMap<String, usize> = und
            .node_ids()
            .iter()
            .enumerate()
            .map(|(i, id)| (id.clone(), i))
            .collect();
        let q = modularity(&und, &assignment, 1.0).unwrap();
        // 2m = 4; degrees a=1, b=2, c=1: Q = -(1/16 + 4/16 + 1/16).
        assert!((q - (-0.375)).abs() < 1e-12, "q = {q}");
    }

    #[test]
    fn modularity_requires_total_assignment() {
        let und = symmetrize(&graph_from(&[("a", "b", 1)]));
        let assignment = BTreeMap::from([("a".to_string(), 0)]);
        assert!(matches!(
            modularity(&und, &assignment, 1.0),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn modularity_zero_weight_graph_is_domain_error() {
        let graph = NarratorGraph::from_parts(vec!["a".to_string()], vec![]).unwrap();
        let und = symmetrize(&graph);
        let assignment = BTreeMap::from([("a".to_string(), 0)]);
        assert!(matches!(
            modularity(&und, &assignment, 1.0),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn louvain_finds_the_two_triangles() {
        let partition = louvain(&two_triangles(), &LouvainConfig::default()).unwrap();
        assert_eq!(partition.community_count, 2);
        assert!((partition.modularity - 0.5).abs() < 1e-12);
        assert_eq!(partition.community_of("a"), partition.community_of("b"));
        assert_eq!(partition.community_of("a"), partition.community_of("c"));
        assert_ne!(partition.community_of("a"), partition.community_of("x"));
    }

    #[test]
    fn louvain_merges_single_edge_endpoints() {
        let partition = louvain(&graph_from(&[("a", "b", 1)]), &LouvainConfig::default()).unwrap();
        assert_eq!(partition.community_count, 1);
        // Q({a,b}) = 1 - 1 = 0 beats the singleton Q = -0.5.
        assert!(partition.modularity.abs() < 1e-12);
    }

    #[test]
    fn louvain_is_deterministic_for_a_seed() {
        let graph = graph_from(&[
            ("a", "b", 2),
            ("b", "c", 1),
            ("c", "d", 3),
            ("d", "a", 1),
            ("b", "d", 1),
            ("e", "f", 2),
            ("f", "g", 2),
            ("g", "e", 2),
            ("c", "e", 1),
        ]);
        let p1 = louvain(&graph, &LouvainConfig::default()).unwrap();
        let p2 = louvain(&graph, &LouvainConfig::default()).unwrap();
        assert_eq!(p1, p2);
    }

    #[test]
    fn louvain_modularity_matches_recomputation() {
        let graph = graph_from(&[
            ("a", "b", 1),
            ("b", "c", 2),
            ("c", "a", 1),
            ("c", "d", 1),
            ("d", "e", 2),
            ("e", "f", 1),
            ("f", "d", 2),
        ]);
        let partition = louvain(&graph, &LouvainConfig::default()).unwrap();
        let q = modularity(&symmetrize(&graph), &partition.assignment, 1.0).unwrap();
        assert!((partition.modularity - q).abs() < 1e-15);
    }

    #[test]
    fn louvain_beats_singletons() {
        let graph = graph_from(&[("a", "b", 1), ("b", "c", 1), ("c", "a", 1)]);
        let und = symmetrize(&graph);
        let singletons: BTreeMap<String, usize> = und
            .node_ids()
            .iter()
            .enumerate()
            .map(|(i, id)| (id.clone(), i))
            .collect();
        let q_singletons = modularity(&und, &singletons, 1.0).unwrap();
        let partition = louvain(&graph, &LouvainConfig::default()).unwrap();
        assert!(partition.modularity >= q_singletons);
    }

    #[test]
    fn louvain_edgeless_graph_is_domain_error() {
        let graph = NarratorGraph::from_parts(vec!["a".to_string()], vec![]).unwrap();
        assert!(matches!(
            louvain(&graph, &LouvainConfig::default()),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn aggregate_remap_is_indexed_by_node_not_label() {
        // Community labels are node indices, and a label can outlive its
        // original owner: here node 1 carries label 2 while nodes 0 and 3
        // carry label 1. remap[x] must be the super-node of x's community.
        let graph = graph_from(&[("a", "b", 1), ("b", "c", 1), ("c", "d", 1)]);
        let work = WorkGraph::from_undirected(&symmetrize(&graph));
        let node_comm = vec![1, 2, 2, 1];
        let (aggregated, remap) = work.aggregate(&node_comm);
        // Sorted distinct labels [1, 2] become dense ids [0, 1].
        assert_eq!(remap, vec![0, 1, 1, 0]);
        assert_eq!(aggregated.node_count(), 2);
        // Total weight is preserved and still equals the degree sum
        // (internal edges became self-loops counting twice).
        assert_eq!(aggregated.total, work.total);
        let degree_sum: f64 = aggregated.degree.iter().sum();
        assert_eq!(degree_sum, aggregated.total);
    }

    #[test]
    fn louvain_community_ids_are_dense() {
        let partition = louvain(&two_triangles(), &LouvainConfig::default()).unwrap();
        let mut seen: Vec<usize> = partition.assignment.values().copied().collect();
        seen.sort_unstable();
        seen.dedup();
        assert_eq!(seen, vec![0, 1]);
    }
}
