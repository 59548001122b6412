//! Seeded preferential-attachment graphs.

use rand::Rng;

use crate::graph::{DirectedGraph, Edge, VertexId};
use crate::rng::derive_rng;

/// Grows a graph one vertex at a time. Vertex `v ≥ 1` emits `k` edges to
/// earlier vertices, each target drawn with probability proportional to its
/// in-degree plus one at the time `v` arrives. Vertex 0 emits nothing, so the
/// graph has exactly `k·(n-1)` edges, listed in arrival order.
pub fn gen_pref_attach(n: usize, k: usize, seed: u64) -> DirectedGraph {
    assert!(n >= 2 && k >= 1, "need n >= 2 and k >= 1");
    let mut rng = derive_rng(seed, "pref-attach", 0);
    // Each vertex appears once for itself and once per in-edge.
    let mut targets: Vec<VertexId> = Vec::with_capacity(n + k * n);
    targets.push(0);
    let mut edges = Vec::with_capacity(k * (n - 1));
    for v in 1..n as VertexId {
        let pool = targets.len();
        let start = edges.len();
        for _ in 0..k {
            let dst = targets[rng.random_range(0..pool)];
            edges.push(Edge::new(v, dst));
        }
        targets.extend(edges[start..].iter().map(|e| e.dst));
        targets.push(v);
    }
    DirectedGraph::new(n, edges).expect("targets are earlier vertices")
}
