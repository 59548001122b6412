//! Shared fixtures for the benchmarks.

use std::sync::Arc;

use dirdense_core::stream::{ordered_edges, StreamOrder};
use dirdense_core::{gen_pref_attach, DirectedGraph, Edge};

/// Preferential-attachment graph with a fixed seed.
pub fn pref_graph(n: usize, k: usize) -> DirectedGraph {
    gen_pref_attach(n, k, 42)
}

/// A star `0 → 1..=leaves` beside a circulant fragment in which each of the
/// `fragment` vertices points at its next `out` neighbours.
pub fn star_and_fragment(leaves: u32, fragment: u32, out: u32) -> DirectedGraph {
    let mut edges: Vec<Edge> = (1..=leaves).map(|l| Edge::new(0, l)).collect();
    let base = leaves + 1;
    for i in 0..fragment {
        for j in 1..=out {
            edges.push(Edge::new(base + i, base + (i + j) % fragment));
        }
    }
    DirectedGraph::new((base + fragment) as usize, edges).expect("ids are in range")
}

/// The shuffled stream order every algorithm in a sweep reads.
pub fn shuffled(g: &DirectedGraph) -> Arc<[Edge]> {
    ordered_edges(g, StreamOrder::Shuffled { seed: 42 })
}
