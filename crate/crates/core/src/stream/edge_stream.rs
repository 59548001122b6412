use std::sync::Arc;

use rand::seq::SliceRandom;

use crate::graph::{DirectedGraph, Edge};
use crate::rng::{derive_rng, STREAM_LABEL};

/// Edge delivery order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StreamOrder {
    /// Input order, e.g. a SNAP file sorted by source id.
    AsGiven,
    /// Uniform permutation determined by the seed.
    Shuffled { seed: u64 },
}

/// A pull-based edge source consumed by the streaming algorithms.
pub trait EdgeSource {
    /// The next edge, or `None` when nothing is available right now.
    /// A source may return `None` while [`remaining`](Self::remaining) is
    /// still positive if more edges arrive later (the MPC feeder does this).
    fn pull(&mut self) -> Option<Edge>;

    /// Edges not yet delivered, including ones not yet available.
    fn remaining(&self) -> usize;

    /// Appends up to `max` available edges to `out`; returns how many.
    fn pull_into(&mut self, max: usize, out: &mut Vec<Edge>) -> usize {
        let mut got = 0;
        while got < max {
            match self.pull() {
                Some(e) => out.push(e),
                None => break,
            }
            got += 1;
        }
        got
    }
}

/// Orders `g`'s edges once; the result can back any number of streams.
pub fn ordered_edges(g: &DirectedGraph, order: StreamOrder) -> Arc<[Edge]> {
    let mut edges = g.edges().to_vec();
    if let StreamOrder::Shuffled { seed } = order {
        edges.shuffle(&mut derive_rng(seed, STREAM_LABEL, 0));
    }
    edges.into()
}

/// Replayable in-memory edge stream with a consumption cursor. Reads only
/// move forward within a pass, so recording how far each pass got is enough
/// to know how often every edge was read.
#[derive(Clone, Debug)]
pub struct EdgeStream {
    edges: Arc<[Edge]>,
    cursor: usize,
    /// Final cursor of each finished pass.
    pass_ends: Vec<usize>,
}

impl EdgeStream {
    pub fn new(edges: Arc<[Edge]>) -> Self {
        EdgeStream {
            edges,
            cursor: 0,
            pass_ends: Vec::new(),
        }
    }

    /// Restarts from the first edge (multi-pass use only).
    pub fn reset(&mut self) {
        self.pass_ends.push(self.cursor);
        self.cursor = 0;
    }

    fn all_pass_ends(&self) -> impl Iterator<Item = usize> + '_ {
        self.pass_ends.iter().copied().chain([self.cursor])
    }

    /// How many times edge `i` of the stream order has been delivered.
    pub fn reads_of(&self, i: usize) -> u32 {
        self.all_pass_ends().filter(|&end| end > i).count() as u32
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Passes started so far, counting the initial one.
    pub fn passes(&self) -> u32 {
        self.pass_ends.len() as u32 + 1
    }

    pub fn max_reads_per_edge(&self) -> u32 {
        self.reads_of(0)
    }

    /// Distinct edges delivered at least once.
    pub fn edges_read(&self) -> usize {
        self.all_pass_ends().max().unwrap_or(0)
    }

    /// Reads the rest of the current pass.
    pub fn drain_pass(&mut self) -> impl Iterator<Item = Edge> + '_ {
        std::iter::from_fn(move || self.pull())
    }
}

impl EdgeSource for EdgeStream {
    fn pull(&mut self) -> Option<Edge> {
        let e = *self.edges.get(self.cursor)?;
        self.cursor += 1;
        Some(e)
    }

    fn remaining(&self) -> usize {
        self.edges.len() - self.cursor
    }

    fn pull_into(&mut self, max: usize, out: &mut Vec<Edge>) -> usize {
        let end = self.cursor.saturating_add(max).min(self.edges.len());
        out.extend_from_slice(&self.edges[self.cursor..end]);
        let got = end - self.cursor;
        self.cursor = end;
        got
    }
}

pub fn make_stream(g: &DirectedGraph, order: StreamOrder) -> EdgeStream {
    EdgeStream::new(ordered_edges(g, order))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    fn three() -> DirectedGraph {
        DirectedGraph::from_pairs([(0, 1), (1, 2), (2, 0)])
    }

    #[test]
    fn as_given_preserves_order() {
        let g = three();
        let mut s = make_stream(&g, StreamOrder::AsGiven);
        let got: Vec<Edge> = s.drain_pass().collect();
        assert_eq!(got, g.edges());
        assert_eq!(s.remaining(), 0);
        assert_eq!(s.max_reads_per_edge(), 1);
    }

    #[test]
    fn shuffle_is_seed_deterministic() {
        let g = three();
        let a: Vec<Edge> = make_stream(&g, StreamOrder::Shuffled { seed: 11 })
            .drain_pass()
            .collect();
        let b: Vec<Edge> = make_stream(&g, StreamOrder::Shuffled { seed: 11 })
            .drain_pass()
            .collect();
        assert_eq!(a, b);
    }

    #[test]
    fn shuffle_is_uniform_over_orders() {
        let g = three();
        let trials = 10_000u64;
        let mut counts: HashMap<Vec<Edge>, u64> = HashMap::new();
        for seed in 0..trials {
            let order: Vec<Edge> = ordered_edges(&g, StreamOrder::Shuffled { seed }).to_vec();
            *counts.entry(order).or_default() += 1;
        }
        assert_eq!(counts.len(), 6);
        for &c in counts.values() {
            let freq = c as f64 / trials as f64;
            assert!((freq - 1.0 / 6.0).abs() <= 0.02, "frequency {freq}");
        }
    }

    #[test]
    fn bulk_reads_advance_the_cursor() {
        let g = three();
        let mut s = make_stream(&g, StreamOrder::AsGiven);
        let mut out = Vec::new();
        assert_eq!(s.pull_into(2, &mut out), 2);
        assert_eq!(s.pull_into(5, &mut out), 1);
        assert_eq!(out, g.edges());
        assert_eq!(s.remaining(), 0);
        assert_eq!(s.max_reads_per_edge(), 1);
    }

    #[test]
    fn reset_counts_passes_and_rereads() {
        let g = three();
        let mut s = make_stream(&g, StreamOrder::AsGiven);
        assert_eq!(s.drain_pass().count(), 3);
        s.reset();
        assert_eq!(s.remaining(), 3);
        assert_eq!(s.drain_pass().count(), 3);
        assert_eq!(s.passes(), 2);
        assert_eq!(s.max_reads_per_edge(), 2);
        s.reset();
        s.pull();
        assert_eq!((s.reads_of(0), s.reads_of(1)), (3, 2));
        assert_eq!(s.edges_read(), 3);
    }
}
