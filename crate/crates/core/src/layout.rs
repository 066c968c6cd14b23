//! Force-directed node placement (Fruchterman-Reingold).
//!
//! Exact all-pairs repulsion, O(N^2) per iteration: at the scale of a
//! narrator network (around 1,400 nodes) exactness is affordable and keeps
//! the layout reproducible. Same graph and seed give bit-identical positions.

use std::collections::BTreeMap;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::graph::NarratorGraph;

/// Layout parameters. The frame is the square of the given area with its
/// origin at (0, 0); cooling is linear from `0.1 * sqrt(area)` down to zero.
#[derive(Debug, Clone, Copy)]
pub struct LayoutConfig {
    pub iterations: usize,
    pub area: f64,
    /// Spacing constant scaling the ideal edge length
    /// `k = spacing * sqrt(area / n)`.
    pub spacing: f64,
    /// Seed for the initial placement.
    pub seed: u64,
}

impl Default for LayoutConfig {
    fn default() -> Self {
        LayoutConfig {
            iterations: 100,
            area: 1.0,
            spacing: 1.0,
            seed: 42,
        }
    }
}

/// Final node coordinates, keyed by narrator id.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct NodePositions {
    positions: BTreeMap<String, (f64, f64)>,
}

impl NodePositions {
    pub fn get(&self, id: &str) -> Option<(f64, f64)> {
        self.positions.get(id).copied()
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, (f64, f64))> {
        self.positions.iter().map(|(id, &xy)| (id.as_str(), xy))
    }

    pub fn contains(&self, id: &str) -> bool {
        self.positions.contains_key(id)
    }
}

impl FromIterator<(String, (f64, f64))> for NodePositions {
    fn from_iter<T: IntoIterator<Item = (String, (f64, f64))>>(iter: T) -> Self {
        NodePositions {
            positions: iter.into_iter().collect(),
        }
    }
}

/// Runs the layout. Zero iterations returns the seeded initial placement;
/// an empty graph returns no positions.
pub fn fr_layout(graph: &NarratorGraph, config: &LayoutConfig) -> NodePositions {
    let n = graph.node_count();
    if n == 0 {
        return NodePositions::default();
    }
    let side = config.area.sqrt();
    let k = config.spacing * (config.area / n as f64).sqrt();

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut pos: Vec<(f64, f64)> = (0..n)
        .map(|_| (rng.gen::<f64>() * side, rng.gen::<f64>() * side))
        .collect();

    let t0 = 0.1 * side;
    let mut disp = vec![(0.0f64, 0.0f64); n];
    for iteration in 0..config.iterations {
        let temperature = t0 * (1.0 - iteration as f64 / config.iterations as f64);
        disp.iter_mut().for_each(|d| *d = (0.0, 0.0));

        // Repulsion between all pairs: f_r(d) = k^2 / d.
        for u in 0..n {
            for v in (u + 1)..n {
                let (dx, dy) = delta(pos[u], pos[v], u, v);
                let dist = (dx * dx + dy * dy).sqrt();
                let force = k * k / dist;
                let (fx, fy) = (dx / dist * force, dy / dist * force);
                disp[u].0 += fx;
                disp[u].1 += fy;
                disp[v].0 -= fx;
                disp[v].1 -= fy;
            }
        }

        // Attraction along edges: f_a(d) = d^2 / k.
        for u in 0..n {
            for &(v, _) in graph.out_edges(u) {
                let (dx, dy) = delta(pos[u], pos[v], u, v);
                let dist = (dx * dx + dy * dy).sqrt();
                let force = dist * dist / k;
                let (fx, fy) = (dx / dist * force, dy / dist * force);
                disp[u].0 -= fx;
                disp[u].1 -= fy;
                disp[v].0 += fx;
                disp[v].1 += fy;
            }
        }

        // Move, capped by the temperature, clamped into the frame.
        for u in 0..n {
            let (dx, dy) = disp[u];
            let len = (dx * dx + dy * dy).sqrt();
            if len > 0.0 {
                let step = len.min(temperature);
                pos[u].0 = (pos[u].0 + dx / len * step).clamp(0.0, side);
                pos[u].1 = (pos[u].1 + dy / len * step).clamp(0.0, side);
            }
        }
    }

    graph
        .node_ids()
        .iter()
        .zip(pos)
        .map(|(id, xy)| (id.clone(), xy))
        .collect()
}

/// Displacement u - v with a deterministic nudge when the points coincide,
/// floored away from zero so force terms stay finite.
fn delta(a: (f64, f64), b: (f64, f64), u: usize, v: usize) -> (f64, f64) {
    const EPS: f64 = 1e-9;
    let (mut dx, mut dy) = (a.0 - b.0, a.1 - b.1);
    if dx == 0.0 && dy == 0.0 {
        // Deterministic separation direction for coincident nodes.
        dx = EPS * (1.0 + (u % 7) as f64);
        dy = EPS * (1.0 + (v % 5) as f64);
    }
    let dist = (dx * dx + dy * dy).sqrt();
    if dist < EPS {
        let scale = EPS / dist;
        (dx * scale, dy * scale)
    } else {
        (dx, dy)
    }
}
