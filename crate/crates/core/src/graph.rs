//! The edge-weighted directed "narrated to" graph and corpus summary
//! statistics.
//!
//! Nodes are narrator ids held in lexicographic order; the position of an id
//! in that order is its dense handle, which fixes floating-point summation
//! order everywhere downstream. An edge teacher -> student carries the number
//! of distinct hadith conveyed along it.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::model::{HadithRecord, NarratorTable};

/// How adjacent narrator pairs are counted into edge weights.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PairDedup {
    /// A pair shared by several chains of one record counts once: weight is
    /// the number of distinct hadith conveyed along the edge.
    #[default]
    Record,
    /// Every chain occurrence counts.
    Chain,
}

/// Options for [`build_graph`].
#[derive(Debug, Clone, Copy, Default)]
pub struct BuildConfig {
    pub pair_dedup: PairDedup,
}

/// Edge-weighted directed graph over narrator ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NarratorGraph {
    nodes: Vec<String>,
    index: HashMap<String, usize>,
    out_adj: Vec<Vec<(usize, u64)>>,
    in_adj: Vec<Vec<(usize, u64)>>,
    edge_count: usize,
}

impl NarratorGraph {
    /// Builds a graph from explicit parts. Node set is the union of `nodes`
    /// and all edge endpoints; self-loops and zero weights are rejected.
    pub fn from_parts(
        nodes: impl IntoIterator<Item = String>,
        edges: impl IntoIterator<Item = (String, String, u64)>,
    ) -> Result<Self> {
        let mut node_set: BTreeSet<String> = nodes.into_iter().collect();
        let mut edge_map: BTreeMap<(String, String), u64> = BTreeMap::new();
        for (src, dst, weight) in edges {
            if src == dst {
                return Err(Error::Validation(format!("self-loop on {src:?}")));
            }
            if weight == 0 {
                return Err(Error::Validation(format!(
                    "zero-weight edge {src:?} -> {dst:?}"
                )));
            }
            node_set.insert(src.clone());
            node_set.insert(dst.clone());
            *edge_map.entry((src, dst)).or_insert(0) += weight;
        }

        let nodes: Vec<String> = node_set.into_iter().collect();
        let index: HashMap<String, usize> = nodes
            .iter()
            .enumerate()
            .map(|(i, id)| (id.clone(), i))
            .collect();
        let mut out_adj = vec![Vec::new(); nodes.len()];
        let mut in_adj = vec![Vec::new(); nodes.len()];
        let edge_count = edge_map.len();
        for ((src, dst), weight) in edge_map {
            let s = index[&src];
            let t = index[&dst];
            out_adj[s].push((t, weight));
            in_adj[t].push((s, weight));
        }
        // BTreeMap iteration already sorts out_adj values; in_adj needs it.
        for list in &mut in_adj {
            list.sort_unstable();
        }
        Ok(NarratorGraph {
            nodes,
            index,
            out_adj,
            in_adj,
            edge_count,
        })
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Node ids in lexicographic order; the index of an id is its handle.
    pub fn node_ids(&self) -> &[String] {
        &self.nodes
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn id_of(&self, handle: usize) -> &str {
        &self.nodes[handle]
    }

    pub fn contains(&self, id: &str) -> bool {
        self.index.contains_key(id)
    }

    /// Outgoing (target, weight) pairs, ascending by target handle.
    pub fn out_edges(&self, handle: usize) -> &[(usize, u64)] {
        &self.out_adj[handle]
    }

    /// Incoming (source, weight) pairs, ascending by source handle.
    pub fn in_edges(&self, handle: usize) -> &[(usize, u64)] {
        &self.in_adj[handle]
    }

    pub fn weight(&self, src: &str, dst: &str) -> Option<u64> {
        let s = self.index_of(src)?;
        let t = self.index_of(dst)?;
        self.out_adj[s]
            .binary_search_by_key(&t, |&(target, _)| target)
            .ok()
            .map(|i| self.out_adj[s][i].1)
    }

    /// All edges as (source id, target id, weight), ascending by
    /// (source, target).
    pub fn edges(&self) -> impl Iterator<Item = (&str, &str, u64)> {
        self.out_adj.iter().enumerate().flat_map(move |(s, list)| {
            list.iter()
                .map(move |&(t, w)| (self.nodes[s].as_str(), self.nodes[t].as_str(), w))
        })
    }
}

/// Per-node degree counts, unweighted and weighted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct DegreeStats {
    pub indegree: u64,
    pub outdegree: u64,
    pub weighted_indegree: u64,
    pub weighted_outdegree: u64,
}

/// Folds validated records into the narrator graph.
///
/// For every chain `[n1..nk]` the edges `n1->n2, ..., n(k-1)->nk` exist; an
/// edge weight counts occurrences per [`PairDedup`]. Records must already
/// have passed validation: an unresolved id here is an internal error.
pub fn build_graph(
    records: &[HadithRecord],
    table: &NarratorTable,
    config: &BuildConfig,
) -> Result<NarratorGraph> {
    let mut nodes: BTreeSet<String> = BTreeSet::new();
    let mut edges: BTreeMap<(String, String), u64> = BTreeMap::new();
    for record in records {
        let mut record_pairs: BTreeSet<(String, String)> = BTreeSet::new();
        for chain in &record.chains {
            for id in &chain.narrators {
                if !table.contains(id) {
                    return Err(Error::Internal(format!(
                        "unvalidated narrator id {id:?} in record {}",
                        record.key
                    )));
                }
                nodes.insert(id.clone());
            }
            for (teacher, student) in chain.adjacent_pairs() {
                let pair = (teacher.to_string(), student.to_string());
                match config.pair_dedup {
                    PairDedup::Record => {
                        record_pairs.insert(pair);
                    }
                    PairDedup::Chain => {
                        *edges.entry(pair).or_insert(0) += 1;
                    }
                }
            }
        }
        for pair in record_pairs {
            *edges.entry(pair).or_insert(0) += 1;
        }
    }
    NarratorGraph::from_parts(nodes, edges.into_iter().map(|((s, t), w)| (s, t, w)))
}

/// Degree profile of a single narrator.
pub fn degree_profile(graph: &NarratorGraph, id: &str) -> Result<DegreeStats> {
    let handle = graph
        .index_of(id)
        .ok_or_else(|| Error::UnknownId(id.to_string()))?;
    let in_edges = graph.in_edges(handle);
    let out_edges = graph.out_edges(handle);
    Ok(DegreeStats {
        indegree: in_edges.len() as u64,
        outdegree: out_edges.len() as u64,
        weighted_indegree: in_edges.iter().map(|&(_, w)| w).sum(),
        weighted_outdegree: out_edges.iter().map(|&(_, w)| w).sum(),
    })
}

/// Corpus-level counts plus a cycle diagnosis.
///
/// The transmission graph is expected to be acyclic but that is diagnosed,
/// not assumed: `cycle_edges` lists every edge inside a strongly connected
/// component of size greater than one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SummaryStats {
    pub hadith_count: usize,
    pub narrator_count: usize,
    pub multi_chain_count: usize,
    pub edge_count: usize,
    /// Narrators per era, counted over graph nodes.
    pub per_era_narrator_counts: BTreeMap<u8, usize>,
    /// Edges participating in a directed cycle, ascending by (source, target).
    pub cycle_edges: Vec<(String, String)>,
}

impl SummaryStats {
    pub fn is_acyclic(&self) -> bool {
        self.cycle_edges.is_empty()
    }
}

/// Summarizes a corpus: counts from `records`, per-era counts over graph
/// nodes resolved through `table`, and the cycle diagnosis.
pub fn corpus_summary(
    graph: &NarratorGraph,
    records: &[HadithRecord],
    table: &NarratorTable,
) -> Result<SummaryStats> {
    let mut per_era = BTreeMap::new();
    for id in graph.node_ids() {
        let narrator = table.get(id).ok_or_else(|| Error::UnknownId(id.clone()))?;
        *per_era.entry(narrator.era).or_insert(0) += 1;
    }
    Ok(SummaryStats {
        hadith_count: records.len(),
        narrator_count: graph.node_count(),
        multi_chain_count: records.iter().filter(|r| r.is_multi_chain()).count(),
        edge_count: graph.edge_count(),
        per_era_narrator_counts: per_era,
        cycle_edges: cycle_edges(graph),
    })
}

/// Edges inside any strongly connected component of size > 1.
pub fn cycle_edges(graph: &NarratorGraph) -> Vec<(String, String)> {
    let component = tarjan_scc(graph);
    let n = graph.node_count();
    let mut component_size = vec![0usize; n];
    for &c in &component {
        component_size[c] += 1;
    }
    let mut out = Vec::new();
    for s in 0..n {
        for &(t, _) in graph.out_edges(s) {
            if component[s] == component[t] && component_size[component[s]] > 1 {
                out.push((graph.id_of(s).to_string(), graph.id_of(t).to_string()));
            }
        }
    }
    out
}

/// Iterative Tarjan; returns the component index of each node.
fn tarjan_scc(graph: &NarratorGraph) -> Vec<usize> {
    let n = graph.node_count();
    const UNSET: usize = usize::MAX;
    let mut index = vec![UNSET; n];
    let mut lowlink = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut component = vec![UNSET; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut next_index = 0usize;
    let mut component_count = 0usize;

    // Explicit DFS frame: (node, next out-edge position).
    let mut call_stack: Vec<(usize, usize)> = Vec::new();
    for root in 0..n {
        if index[root] != UNSET {
            continue;
        }
        call_stack.push((root, 0));
        index[root] = next_index;
        lowlink[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut edge_pos)) = call_stack.last_mut() {
            if let Some(&(w, _)) = graph.out_edges(v).get(*edge_pos) {
                *edge_pos += 1;
                if index[w] == UNSET {
                    index[w] = next_index;
                    lowlink[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call_stack.push((w, 0));
                } else if on_stack[w] {
                    lowlink[v] = lowlink[v].min(index[w]);
                }
            } else {
                call_stack.pop();
                if let Some(&(parent, _)) = call_stack.last() {
                    lowlink[parent] = lowlink[parent].min(lowlink[v]);
                }
                if lowlink[v] == index[v] {
                    while let Some(w) = stack.pop() {
                        on_stack[w] = false;
                        component[w] = component_count;
                        if w == v {
                            break;
                        }
                    }
                    component_count += 1;
                }
            }
        }
    }
    component
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Chain, HadithRecord, Narrator, RecordKey};

    fn table_for(ids: &[&str]) -> NarratorTable {
        let mut table = NarratorTable::new();
        for id in ids {
            table
                .insert(Narrator::new(*id, *id, 0, "").unwrap())
                .unwrap();
        }
        table
    }

    fn record(number: &str, chains: &[&[&str]]) -> HadithRecord {
        HadithRecord::new(
            RecordKey::new("c", "b", number),
            chains
                .iter()
                .map(|c| Chain::new(c.iter().map(|s| s.to_string()).collect()))
                .collect(),
        )
    }

    #[test]
    fn single_chain_builds_path() {
        let table = table_for(&["a", "b", "c"]);
        let graph = build_graph(
            &[record("1", &[&["a", "b", "c"]])],
            &table,
            &BuildConfig::default(),
        )
        .unwrap();
        assert_eq!(graph.node_count(), 3);
        assert_eq!(graph.edge_count(), 2);
        assert_eq!(graph.weight("a", "b"), Some(1));
        assert_eq!(graph.weight("b", "c"), Some(1));
        assert_eq!(graph.weight("c", "b"), None);
    }

    #[test]
    fn single_narrator_chain_adds_node_without_edges() {
        let table = table_for(&["solo", "a", "b"]);
        let records = vec![record("1", &[&["solo"]]), record("2", &[&["a", "b"]])];
        let graph = build_graph(&records, &table, &BuildConfig::default()).unwrap();
        assert_eq!(graph.node_count(), 3);
        assert_eq!(graph.edge_count(), 1);
        let solo = degree_profile(&graph, "solo").unwrap();
        assert_eq!(solo, DegreeStats::default());
    }

    #[test]
    fn pair_in_three_records_weighs_three() {
        let table = table_for(&["a", "b"]);
        let records = vec![
            record("1", &[&["a", "b"]]),
            record("2", &[&["a", "b"]]),
            record("3", &[&["a", "b"]]),
        ];
        let graph = build_graph(&records, &table, &BuildConfig::default()).unwrap();
        assert_eq!(graph.weight("a", "b"), Some(3));
    }

    #[test]
    fn shared_pairs_within_one_record_count_once() {
        // Two chains merging on the source side: anas -> qatada -> hmam, then
        // forking to two students.
        let table = table_for(&["anas", "qatada", "hmam", "hisham", "snan"]);
        let records = vec![record(
            "133",
            &[
                &["anas", "qatada", "hmam", "hisham"],
                &["anas", "qatada", "hmam", "snan"],
            ],
        )];
        let graph = build_graph(&records, &table, &BuildConfig::default()).unwrap();
        assert_eq!(graph.node_count(), 5);
        assert_eq!(graph.edge_count(), 4);
        assert_eq!(graph.weight("anas", "qatada"), Some(1));
        assert_eq!(graph.weight("qatada", "hmam"), Some(1));
        assert_eq!(graph.weight("hmam", "hisham"), Some(1));
        assert_eq!(graph.weight("hmam", "snan"), Some(1));
    }

    #[test]
    fn chain_dedup_mode_counts_every_chain() {
        let table = table_for(&["anas", "qatada", "x", "y"]);
        let records = vec![record(
            "1",
            &[&["anas", "qatada", "x"], &["anas", "qatada", "y"]],
        )];
        let config = BuildConfig {
            pair_dedup: PairDedup::Chain,
        };
        let graph = build_graph(&records, &table, &config).unwrap();
        assert_eq!(graph.weight("anas", "qatada"), Some(2));
        assert_eq!(graph.weight("qatada", "x"), Some(1));
    }

    #[test]
    fn weight_sum_equals_distinct_pairs_per_record() {
        let table = table_for(&["a", "b", "c", "d"]);
        let records = vec![
            record("1", &[&["a", "b", "c"], &["a", "b", "d"]]),
            record("2", &[&["b", "c"]]),
        ];
        let graph = build_graph(&records, &table, &BuildConfig::default()).unwrap();
        let total: u64 = graph.edges().map(|(_, _, w)| w).sum();
        // Record 1 has distinct pairs {ab, bc, bd}; record 2 has {bc}.
        assert_eq!(total, 4);
    }

    #[test]
    fn build_is_deterministic_under_record_order() {
        let table = table_for(&["a", "b", "c", "d"]);
        let mut records = vec![
            record("1", &[&["a", "b"]]),
            record("2", &[&["c", "d"]]),
            record("3", &[&["b", "c"]]),
        ];
        let forward = build_graph(&records, &table, &BuildConfig::default()).unwrap();
        records.reverse();
        let backward = build_graph(&records, &table, &BuildConfig::default()).unwrap();
        assert_eq!(forward, backward);
    }

    #[test]
    fn unknown_id_is_internal_error() {
        let table = table_for(&["a"]);
        let err = build_graph(
            &[record("1", &[&["a", "zz"]])],
            &table,
            &BuildConfig::default(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::Internal(_)));
    }

    #[test]
    fn degree_profile_on_path_endpoints_and_interior() {
        let table = table_for(&["f", "e", "d", "c", "b", "a"]);
        // Source-first path f -> e -> d -> c -> b -> a.
        let graph = build_graph(
            &[record("1", &[&["f", "e", "d", "c", "b", "a"]])],
            &table,
            &BuildConfig::default(),
        )
        .unwrap();
        let source = degree_profile(&graph, "f").unwrap();
        assert_eq!((source.indegree, source.outdegree), (0, 1));
        let interior = degree_profile(&graph, "b").unwrap();
        assert_eq!((interior.indegree, interior.outdegree), (1, 1));
        let sink = degree_profile(&graph, "a").unwrap();
        assert_eq!((sink.indegree, sink.outdegree), (1, 0));
    }

    #[test]
    fn isolated_node_profile_is_zero() {
        let graph = NarratorGraph::from_parts(vec!["solo".to_string()], vec![]).unwrap();
        let stats = degree_profile(&graph, "solo").unwrap();
        assert_eq!(stats, DegreeStats::default());
    }

    #[test]
    fn degree_profile_unknown_id_errors() {
        let graph = NarratorGraph::from_parts(vec!["a".to_string()], vec![]).unwrap();
        assert!(matches!(
            degree_profile(&graph, "zz"),
            Err(Error::UnknownId(_))
        ));
    }

    #[test]
    fn summary_counts_fixture() {
        let table = table_for(&["a", "b", "c", "d", "e", "f", "g"]);
        let records = vec![
            record("1", &[&["a", "b"]]),
            record("2", &[&["b", "c"]]),
            record("3", &[&["c", "d"]]),
            record("4", &[&["e", "f"]]),
            record("5", &[&["f", "g"]]),
        ];
        let graph = build_graph(&records, &table, &BuildConfig::default()).unwrap();
        let summary = corpus_summary(&graph, &records, &table).unwrap();
        assert_eq!(summary.hadith_count, 5);
        assert_eq!(summary.narrator_count, 7);
        assert_eq!(summary.multi_chain_count, 0);
        assert_eq!(summary.edge_count, 5);
        assert!(summary.is_acyclic());
        // All fixture narrators are generation 0, era 1.
        assert_eq!(summary.per_era_narrator_counts.get(&1), Some(&7));
    }

    #[test]
    fn two_cycle_is_reported() {
        let table = table_for(&["a", "b"]);
        let records = vec![record("1", &[&["a", "b"]]), record("2", &[&["b", "a"]])];
        let graph = build_graph(&records, &table, &BuildConfig::default()).unwrap();
        let summary = corpus_summary(&graph, &records, &table).unwrap();
        assert_eq!(
            summary.cycle_edges,
            vec![
                ("a".to_string(), "b".to_string()),
                ("b".to_string(), "a".to_string())
            ]
        );
    }

    #[test]
    fn longer_cycle_and_tail_detected() {
        // a -> b -> c -> a plus c -> d; only the triangle edges cycle.
        let graph = NarratorGraph::from_parts(
            vec![],
            vec![
                ("a".into(), "b".into(), 1),
                ("b".into(), "c".into(), 1),
                ("c".into(), "a".into(), 1),
                ("c".into(), "d".into(), 1),
            ],
        )
        .unwrap();
        let cyclic = cycle_edges(&graph);
        assert_eq!(cyclic.len(), 3);
        assert!(!cyclic.contains(&("c".to_string(), "d".to_string())));
    }

    #[test]
    fn from_parts_rejects_self_loop() {
        let err = NarratorGraph::from_parts(vec![], vec![("a".into(), "a".into(), 1)]).unwrap_err();
        assert!(matches!(err, Error::Validation(_)));
    }
}
