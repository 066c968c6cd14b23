//! Centrality measures over the narrator graph: degree variants, PageRank,
//! and Brandes betweenness, with deterministic top-k ranking.
//!
//! Determinism contract: node handles fix every summation order, so repeated
//! runs on the same graph produce bit-identical score tables. Betweenness may
//! fan source nodes out over threads (capped by `ISNAD_THREADS`); per-source
//! contributions are reduced in ascending source order, so the result does
//! not depend on thread count or schedule.

use std::collections::BTreeMap;
use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::NarratorGraph;

/// Per-node real-valued scores for one measure.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreTable {
    pub measure_name: String,
    scores: BTreeMap<String, f64>,
}

impl ScoreTable {
    /// Builds a table from per-handle values; one score per graph node.
    pub fn from_values(
        measure_name: impl Into<String>,
        graph: &NarratorGraph,
        values: &[f64],
    ) -> Self {
        debug_assert_eq!(values.len(), graph.node_count());
        let scores = graph
            .node_ids()
            .iter()
            .zip(values)
            .map(|(id, &v)| (id.clone(), v))
            .collect();
        ScoreTable {
            measure_name: measure_name.into(),
            scores,
        }
    }

    pub fn get(&self, id: &str) -> Option<f64> {
        self.scores.get(id).copied()
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    /// (id, score) pairs ascending by id.
    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.scores.iter().map(|(id, &score)| (id.as_str(), score))
    }
}

/// The `k` highest-scoring entries, descending by score, ties broken
/// ascending by id. `k` larger than the table returns the whole table.
pub fn top_k(scores: &ScoreTable, k: usize) -> Vec<(String, f64)> {
    let mut entries: Vec<(String, f64)> = scores
        .iter()
        .map(|(id, score)| (id.to_string(), score))
        .collect();
    entries.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    entries.truncate(k);
    entries
}

/// Which degree variant to score.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DegreeKind {
    In,
    Out,
    WeightedIn,
    WeightedOut,
}

impl DegreeKind {
    pub fn measure_name(self) -> &'static str {
        match self {
            DegreeKind::In => "indegree",
            DegreeKind::Out => "outdegree",
            DegreeKind::WeightedIn => "weighted-indegree",
            DegreeKind::WeightedOut => "weighted-outdegree",
        }
    }
}

/// Scores every node by one degree variant.
pub fn degree_scores(graph: &NarratorGraph, kind: DegreeKind) -> ScoreTable {
    let values: Vec<f64> = (0..graph.node_count())
        .map(|v| match kind {
            DegreeKind::In => graph.in_edges(v).len() as f64,
            DegreeKind::Out => graph.out_edges(v).len() as f64,
            DegreeKind::WeightedIn => graph.in_edges(v).iter().map(|&(_, w)| w as f64).sum(),
            DegreeKind::WeightedOut => graph.out_edges(v).iter().map(|&(_, w)| w as f64).sum(),
        })
        .collect();
    ScoreTable::from_values(kind.measure_name(), graph, &values)
}

/// All four degree tables: in, out, weighted-in, weighted-out.
pub fn weighted_degree(graph: &NarratorGraph) -> [ScoreTable; 4] {
    [
        degree_scores(graph, DegreeKind::In),
        degree_scores(graph, DegreeKind::Out),
        degree_scores(graph, DegreeKind::WeightedIn),
        degree_scores(graph, DegreeKind::WeightedOut),
    ]
}

/// PageRank parameters.
#[derive(Debug, Clone, Copy)]
pub struct PageRankConfig {
    /// Damping factor, in (0, 1).
    pub damping: f64,
    /// Stop when the L1 change of one iteration falls below this.
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Distribute a node's rank proportionally to edge weights; when false,
    /// uniformly over out-edges.
    pub use_edge_weights: bool,
}

impl Default for PageRankConfig {
    fn default() -> Self {
        PageRankConfig {
            damping: 0.85,
            tolerance: 1e-9,
            max_iterations: 200,
            use_edge_weights: true,
        }
    }
}

/// PageRank scores plus convergence information.
#[derive(Debug, Clone)]
pub struct PageRank {
    pub scores: ScoreTable,
    /// False when `max_iterations` was hit before the tolerance.
    pub converged: bool,
    pub iterations: usize,
}

/// Power iteration of
/// `PR(v) = (1-d)/N + d * (sum over in-edges of PR(u) * w(u,v)/W_out(u) + D/N)`
/// where `D` is the pooled rank of dangling nodes, redistributed uniformly.
/// Scores always sum to 1.
pub fn pagerank(graph: &NarratorGraph, config: &PageRankConfig) -> Result<PageRank> {
    let n = graph.node_count();
    if n == 0 {
        return Err(Error::Domain("pagerank needs a non-empty graph".into()));
    }
    if !(config.damping > 0.0 && config.damping < 1.0) {
        return Err(Error::Domain(format!(
            "damping {} outside (0, 1)",
            config.damping
        )));
    }
    if !config.tolerance.is_finite() || config.tolerance <= 0.0 {
        return Err(Error::Domain("tolerance must be positive".into()));
    }

    let d = config.damping;
    let nf = n as f64;
    let out_mass: Vec<f64> = (0..n)
        .map(|u| {
            if config.use_edge_weights {
                graph.out_edges(u).iter().map(|&(_, w)| w as f64).sum()
            } else {
                graph.out_edges(u).len() as f64
            }
        })
        .collect();
    let dangling: Vec<usize> = (0..n).filter(|&u| graph.out_edges(u).is_empty()).collect();

    let mut ranks = vec![1.0 / nf; n];
    let mut next = vec![0.0; n];
    let mut converged = false;
    let mut iterations = 0;

    for _ in 0..config.max_iterations {
        iterations += 1;
        let dangling_mass: f64 = dangling.iter().map(|&u| ranks[u]).sum();
        let base = (1.0 - d) / nf + d * dangling_mass / nf;
        next.iter_mut().for_each(|x| *x = base);
        for u in 0..n {
            if graph.out_edges(u).is_empty() {
                continue;
            }
            let share = d * ranks[u] / out_mass[u];
            for &(v, w) in graph.out_edges(u) {
                let portion = if config.use_edge_weights {
                    w as f64
                } else {
                    1.0
                };
                next[v] += share * portion;
            }
        }
        let change: f64 = ranks
            .iter()
            .zip(next.iter())
            .map(|(a, b)| (a - b).abs())
            .sum();
        std::mem::swap(&mut ranks, &mut next);
        if change < config.tolerance {
            converged = true;
            break;
        }
    }

    Ok(PageRank {
        scores: ScoreTable::from_values("pagerank", graph, &ranks),
        converged,
        iterations,
    })
}

/// Betweenness parameters. Paths are directed, unweighted hops: edge weights
/// are hadith counts, not distances.
#[derive(Debug, Clone, Copy, Default)]
pub struct BetweennessConfig {
    /// Divide scores by (N-1)(N-2).
    pub normalized: bool,
}

/// Brandes betweenness over directed unweighted shortest paths.
pub fn betweenness(graph: &NarratorGraph, config: &BetweennessConfig) -> Result<ScoreTable> {
    let n = graph.node_count();
    if n == 0 {
        return Err(Error::Domain("betweenness needs a non-empty graph".into()));
    }

    let mut scores = vec![0.0f64; n];
    let threads = effective_threads(n);
    // Sources are processed in fixed batches; contributions are added in
    // ascending source order regardless of how many threads computed them.
    const BATCH: usize = 128;
    for batch_start in (0..n).step_by(BATCH) {
        let batch: Vec<usize> = (batch_start..(batch_start + BATCH).min(n)).collect();
        let deltas = if threads <= 1 || batch.len() < 2 {
            batch
                .iter()
                .map(|&s| brandes_from_source(graph, s))
                .collect::<Vec<_>>()
        } else {
            let chunk = batch.len().div_ceil(threads);
            std::thread::scope(|scope| {
                let handles: Vec<_> = batch
                    .chunks(chunk)
                    .map(|sources| {
                        scope.spawn(move || {
                            sources
                                .iter()
                                .map(|&s| brandes_from_source(graph, s))
                                .collect::<Vec<_>>()
                        })
                    })
                    .collect();
                handles
                    .into_iter()
                    .flat_map(|h| h.join().expect("betweenness worker panicked"))
                    .collect::<Vec<_>>()
            })
        };
        for delta in deltas {
            for v in 0..n {
                scores[v] += delta[v];
            }
        }
    }

    if config.normalized {
        let pairs = if n > 2 {
            ((n - 1) * (n - 2)) as f64
        } else {
            0.0
        };
        if pairs > 0.0 {
            for s in &mut scores {
                *s /= pairs;
            }
        } else {
            scores.iter_mut().for_each(|s| *s = 0.0);
        }
    }

    Ok(ScoreTable::from_values("betweenness", graph, &scores))
}

/// Dependency accumulation for one source: BFS forward, then walk the stack
/// backwards summing delta(v) = sum over successors w of
/// sigma(v)/sigma(w) * (1 + delta(w)).
fn brandes_from_source(graph: &NarratorGraph, source: usize) -> Vec<f64> {
    let n = graph.node_count();
    let mut stack = Vec::with_capacity(n);
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut sigma = vec![0.0f64; n];
    let mut dist = vec![-1i64; n];
    sigma[source] = 1.0;
    dist[source] = 0;

    let mut queue = VecDeque::new();
    queue.push_back(source);
    while let Some(v) = queue.pop_front() {
        stack.push(v);
        for &(w, _) in graph.out_edges(v) {
            if dist[w] < 0 {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
            if dist[w] == dist[v] + 1 {
                sigma[w] += sigma[v];
                preds[w].push(v);
            }
        }
    }

    let mut delta = vec![0.0f64; n];
    let mut out = vec![0.0f64; n];
    while let Some(w) = stack.pop() {
        for &v in &preds[w] {
            delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
        }
        if w != source {
            out[w] = delta[w];
        }
    }
    out
}

/// Worker threads to use for per-source fan-out. `ISNAD_THREADS` caps the
/// machine's available parallelism; small graphs stay sequential because
/// spawn overhead dominates.
fn effective_threads(n: usize) -> usize {
    if n < 256 {
        return 1;
    }
    let available = std::thread::available_parallelism()
        .map(|p| p.get())
        .unwrap_or(1);
    let cap = std::env::var("ISNAD_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&t| t >= 1)
        .unwrap_or(available);
    cap.min(available).max(1)
}
