//! Seeded random graph generators for property suites.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::EdgeListGraph;

/// Parameters for [`random_directed_graph`].
#[derive(Debug, Clone, Copy)]
pub struct RandomGraphSpec {
    pub max_nodes: usize,
    /// Target edge count as a multiple of the node count.
    pub edge_factor: f64,
    pub max_weight: u64,
    /// Probability of also adding the reverse of a sampled edge, seeding
    /// 2-cycles.
    pub reciprocal_prob: f64,
}

impl Default for RandomGraphSpec {
    fn default() -> Self {
        RandomGraphSpec {
            max_nodes: 50,
            edge_factor: 2.0,
            max_weight: 9,
            reciprocal_prob: 0.15,
        }
    }
}

/// A seeded random directed weighted graph without self-loops or duplicate
/// edges. Node counts start at 2; dangling nodes arise naturally and some
/// seeds produce 2-cycles via `reciprocal_prob`.
pub fn random_directed_graph(seed: u64, spec: &RandomGraphSpec) -> EdgeListGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(2..=spec.max_nodes.max(2));
    let target = ((n as f64) * spec.edge_factor) as usize;
    let mut seen = std::collections::BTreeSet::new();
    let mut edges = Vec::new();
    for _ in 0..target * 3 {
        if edges.len() >= target {
            break;
        }
        let s = rng.gen_range(0..n);
        let t = rng.gen_range(0..n);
        if s == t {
            continue;
        }
        let w = rng.gen_range(1..=spec.max_weight);
        if seen.insert((s, t)) {
            edges.push((s, t, w));
        }
        if rng.gen_bool(spec.reciprocal_prob) && seen.insert((t, s)) {
            edges.push((t, s, rng.gen_range(1..=spec.max_weight)));
        }
    }
    EdgeListGraph {
        node_count: n,
        edges,
    }
}

/// A seeded random narrator table as (id, name, generation, city) rows with
/// unique ids.
pub fn random_narrator_rows(seed: u64, count: usize) -> Vec<(String, String, u8, String)> {
    const CITIES: [&str; 8] = [
        "Makkah", "Madinah", "Kufa", "Basra", "Baghdad", "Merv", "Bukhara", "",
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let id = format!("{}", 10_000 + i);
            let name = format!("Narrator {i}");
            let generation = rng.gen_range(0..=12u8);
            let city = CITIES[rng.gen_range(0..CITIES.len())].to_string();
            (id, name, generation, city)
        })
        .collect()
}
