//! Immutable directed multigraph storage, vertex-set pairs and the
//! `|E(S,T)| / sqrt(|S|·|T|)` density objective.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

pub type VertexId = u32;

/// A directed edge `src → dst`. Self-loops and parallel copies are legal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub src: VertexId,
    pub dst: VertexId,
}

impl Edge {
    pub const fn new(src: VertexId, dst: VertexId) -> Self {
        Edge { src, dst }
    }
}

impl From<(VertexId, VertexId)> for Edge {
    fn from((src, dst): (VertexId, VertexId)) -> Self {
        Edge { src, dst }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("edge {index} ({src} -> {dst}) references a vertex outside 0..{n}")]
    VertexOutOfRange {
        index: usize,
        src: VertexId,
        dst: VertexId,
        n: usize,
    },
    #[error("vertex count {0} does not fit in a 32-bit vertex id")]
    TooManyVertices(usize),
}

/// Compressed adjacency: `offsets[v]..offsets[v + 1]` indexes into `edge_ids`.
#[derive(Clone, Debug)]
struct Adjacency {
    offsets: Vec<usize>,
    edge_ids: Vec<usize>,
}

impl Adjacency {
    fn build(n: usize, edges: &[Edge], key: impl Fn(&Edge) -> VertexId) -> Self {
        let mut offsets = vec![0usize; n + 1];
        for e in edges {
            offsets[key(e) as usize + 1] += 1;
        }
        for v in 0..n {
            offsets[v + 1] += offsets[v];
        }
        let mut fill = offsets.clone();
        let mut edge_ids = vec![0usize; edges.len()];
        for (i, e) in edges.iter().enumerate() {
            let slot = &mut fill[key(e) as usize];
            edge_ids[*slot] = i;
            *slot += 1;
        }
        Adjacency { offsets, edge_ids }
    }

    fn ids(&self, v: VertexId) -> &[usize] {
        let v = v as usize;
        &self.edge_ids[self.offsets[v]..self.offsets[v + 1]]
    }
}

/// Directed multigraph over vertices `0..n`. Immutable once built, so it can be
/// shared freely between concurrent runs.
#[derive(Clone, Debug)]
pub struct DirectedGraph {
    n: usize,
    edges: Vec<Edge>,
    out_adj: Adjacency,
    in_adj: Adjacency,
}

impl DirectedGraph {
    pub fn new(n: usize, edges: Vec<Edge>) -> Result<Self, GraphError> {
        if n > VertexId::MAX as usize {
            return Err(GraphError::TooManyVertices(n));
        }
        if let Some((index, e)) = edges
            .iter()
            .enumerate()
            .find(|(_, e)| e.src as usize >= n || e.dst as usize >= n)
        {
            return Err(GraphError::VertexOutOfRange {
                index,
                src: e.src,
                dst: e.dst,
                n,
            });
        }
        let out_adj = Adjacency::build(n, &edges, |e| e.src);
        let in_adj = Adjacency::build(n, &edges, |e| e.dst);
        Ok(DirectedGraph {
            n,
            edges,
            out_adj,
            in_adj,
        })
    }

    /// Builds a graph whose vertex count is one past the largest id used.
    pub fn from_pairs<I>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (VertexId, VertexId)>,
    {
        let edges: Vec<Edge> = pairs.into_iter().map(Edge::from).collect();
        let n = edges
            .iter()
            .map(|e| e.src.max(e.dst) as usize + 1)
            .max()
            .unwrap_or(0);
        DirectedGraph::new(n, edges).expect("vertex count derived from edges")
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn out_degree(&self, v: VertexId) -> usize {
        self.out_adj.ids(v).len()
    }

    pub fn in_degree(&self, v: VertexId) -> usize {
        self.in_adj.ids(v).len()
    }

    pub fn out_edges(&self, v: VertexId) -> impl Iterator<Item = &Edge> + '_ {
        self.out_adj.ids(v).iter().map(move |&i| &self.edges[i])
    }

    pub fn in_edges(&self, v: VertexId) -> impl Iterator<Item = &Edge> + '_ {
        self.in_adj.ids(v).iter().map(move |&i| &self.edges[i])
    }
}

/// Membership set over `0..n` with an O(1) size counter.
#[derive(Clone, PartialEq, Eq)]
pub struct VertexSet {
    members: Vec<bool>,
    len: usize,
}

impl VertexSet {
    pub fn empty(n: usize) -> Self {
        VertexSet {
            members: vec![false; n],
            len: 0,
        }
    }

    pub fn full(n: usize) -> Self {
        VertexSet {
            members: vec![true; n],
            len: n,
        }
    }

    pub fn from_ids<I: IntoIterator<Item = VertexId>>(n: usize, ids: I) -> Self {
        let mut set = VertexSet::empty(n);
        for v in ids {
            set.insert(v);
        }
        set
    }

    pub fn universe(&self) -> usize {
        self.members.len()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn contains(&self, v: VertexId) -> bool {
        self.members.get(v as usize).copied().unwrap_or(false)
    }

    pub fn insert(&mut self, v: VertexId) -> bool {
        let slot = &mut self.members[v as usize];
        let added = !*slot;
        *slot = true;
        self.len += added as usize;
        added
    }

    pub fn remove(&mut self, v: VertexId) -> bool {
        let slot = &mut self.members[v as usize];
        let removed = *slot;
        *slot = false;
        self.len -= removed as usize;
        removed
    }

    pub fn iter(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.members
            .iter()
            .enumerate()
            .filter(|(_, &m)| m)
            .map(|(v, _)| v as VertexId)
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A candidate `(S, T)`. The sets may overlap; `S = T` is the undirected case.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexSetPair {
    pub s: VertexSet,
    pub t: VertexSet,
    /// `|E(S,T)|` when known. Must match a fresh recount.
    pub cross_edges: Option<u64>,
}

impl VertexSetPair {
    pub fn new(s: VertexSet, t: VertexSet) -> Self {
        debug_assert_eq!(s.universe(), t.universe());
        VertexSetPair {
            s,
            t,
            cross_edges: None,
        }
    }

    /// `(V, V)`.
    pub fn full(n: usize) -> Self {
        VertexSetPair::new(VertexSet::full(n), VertexSet::full(n))
    }

    pub fn from_ids<I, J>(n: usize, s: I, t: J) -> Self
    where
        I: IntoIterator<Item = VertexId>,
        J: IntoIterator<Item = VertexId>,
    {
        VertexSetPair::new(VertexSet::from_ids(n, s), VertexSet::from_ids(n, t))
    }

    /// Whether `e ∈ E(S,T)`.
    #[inline]
    pub fn admits(&self, e: &Edge) -> bool {
        self.s.contains(e.src) && self.t.contains(e.dst)
    }

    /// Both sides are the whole vertex set.
    pub fn is_full(&self) -> bool {
        self.s.len() == self.s.universe() && self.t.len() == self.t.universe()
    }

    pub fn either_empty(&self) -> bool {
        self.s.is_empty() || self.t.is_empty()
    }

    pub fn sizes(&self) -> (usize, usize) {
        (self.s.len(), self.t.len())
    }

    pub fn with_cross_edges(mut self, count: u64) -> Self {
        self.cross_edges = Some(count);
        self
    }
}

/// Edges per geometric-mean vertex; zero when either side is empty.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Default)]
pub struct Density(f64);

impl Density {
    pub const ZERO: Density = Density(0.0);

    pub fn from_counts(cross: u64, s_len: usize, t_len: usize) -> Self {
        if s_len == 0 || t_len == 0 {
            return Density::ZERO;
        }
        Density(cross as f64 / ((s_len as f64) * (t_len as f64)).sqrt())
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl fmt::Display for Density {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

pub fn count_cross_edges_in(edges: &[Edge], pair: &VertexSetPair) -> u64 {
    edges.iter().filter(|e| pair.admits(e)).count() as u64
}

/// `|{(i,j) ∈ E : i ∈ S, j ∈ T}|` with parallel edges counted separately.
pub fn count_cross_edges(g: &DirectedGraph, pair: &VertexSetPair) -> u64 {
    count_cross_edges_in(g.edges(), pair)
}

pub fn density(g: &DirectedGraph, pair: &VertexSetPair) -> Density {
    density_in(g.edges(), pair)
}

pub fn density_in(edges: &[Edge], pair: &VertexSetPair) -> Density {
    if pair.either_empty() {
        return Density::ZERO;
    }
    Density::from_counts(
        count_cross_edges_in(edges, pair),
        pair.s.len(),
        pair.t.len(),
    )
}

/// Degrees restricted to a pair: `out[v] = |E(v,T)|` for `v ∈ S`,
/// `inn[v] = |E(S,v)|` for `v ∈ T`, zero elsewhere.
#[derive(Clone, Debug, Default)]
pub struct RestrictedDegrees {
    pub out: Vec<u64>,
    pub inn: Vec<u64>,
    pub cross: u64,
}

impl RestrictedDegrees {
    pub fn zeroed(n: usize) -> Self {
        RestrictedDegrees {
            out: vec![0; n],
            inn: vec![0; n],
            cross: 0,
        }
    }

    fn reset(&mut self, n: usize) {
        self.out.clear();
        self.out.resize(n, 0);
        self.inn.clear();
        self.inn.resize(n, 0);
        self.cross = 0;
    }

    /// Recomputes in place from an edge view, reusing the buffers.
    pub fn recount(&mut self, edges: &[Edge], pair: &VertexSetPair) {
        self.reset(pair.s.universe());
        for e in edges.iter().filter(|e| pair.admits(e)) {
            self.out[e.src as usize] += 1;
            self.inn[e.dst as usize] += 1;
            self.cross += 1;
        }
    }

    /// Like [`recount`](Self::recount), and drops edges outside `E(S,T)`
    /// from `edges` in the same pass.
    pub fn recount_retaining(&mut self, edges: &mut Vec<Edge>, pair: &VertexSetPair) {
        self.reset(pair.s.universe());
        edges.retain(|e| {
            let keep = pair.admits(e);
            if keep {
                self.out[e.src as usize] += 1;
                self.inn[e.dst as usize] += 1;
            }
            keep
        });
        self.cross = edges.len() as u64;
    }

    pub fn from_edges(edges: &[Edge], pair: &VertexSetPair) -> Self {
        let mut d = RestrictedDegrees::default();
        d.recount(edges, pair);
        d
    }

    /// `v ↦ |E(v,T)|` over `v ∈ S`.
    pub fn out_map(&self, pair: &VertexSetPair) -> BTreeMap<VertexId, u64> {
        pair.s.iter().map(|v| (v, self.out[v as usize])).collect()
    }

    /// `v ↦ |E(S,v)|` over `v ∈ T`.
    pub fn in_map(&self, pair: &VertexSetPair) -> BTreeMap<VertexId, u64> {
        pair.t.iter().map(|v| (v, self.inn[v as usize])).collect()
    }
}

pub fn restricted_degrees(g: &DirectedGraph, pair: &VertexSetPair) -> RestrictedDegrees {
    RestrictedDegrees::from_edges(g.edges(), pair)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle4() -> DirectedGraph {
        DirectedGraph::from_pairs([(0, 1), (1, 2), (2, 3), (3, 0)])
    }

    #[test]
    fn cross_edges_respect_direction() {
        let g = DirectedGraph::from_pairs([(0, 1)]);
        assert_eq!(
            count_cross_edges(&g, &VertexSetPair::from_ids(2, [0], [1])),
            1
        );
        assert_eq!(
            count_cross_edges(&g, &VertexSetPair::from_ids(2, [1], [0])),
            0
        );
        assert_eq!(count_cross_edges(&cycle4(), &VertexSetPair::full(4)), 4);
    }

    #[test]
    fn density_examples() {
        let g = DirectedGraph::from_pairs([(0, 1)]);
        assert_eq!(
            density(&g, &VertexSetPair::from_ids(2, [0], [1])).value(),
            1.0
        );
        assert_eq!(
            density(&g, &VertexSetPair::from_ids(2, [], [1])).value(),
            0.0
        );

        let star = DirectedGraph::from_pairs((1..=100).map(|leaf| (0, leaf)));
        let pair = VertexSetPair::from_ids(101, [0], 1..=100);
        assert_eq!(density(&star, &pair).value(), 10.0);
    }

    #[test]
    fn restricted_degree_examples() {
        let star = DirectedGraph::from_pairs([(0, 1), (0, 2), (0, 3)]);
        let pair = VertexSetPair::from_ids(4, [0], [1, 2, 3]);
        let d = restricted_degrees(&star, &pair);
        assert_eq!(d.out_map(&pair), BTreeMap::from([(0, 3)]));
        assert_eq!(d.in_map(&pair), BTreeMap::from([(1, 1), (2, 1), (3, 1)]));

        let parallel = DirectedGraph::from_pairs([(0, 2), (0, 2)]);
        let pair = VertexSetPair::from_ids(3, [0, 1], [2]);
        let d = restricted_degrees(&parallel, &pair);
        assert_eq!(d.out_map(&pair), BTreeMap::from([(0, 2), (1, 0)]));
        assert_eq!(d.in_map(&pair), BTreeMap::from([(2, 2)]));

        let pair = VertexSetPair::full(4);
        let d = restricted_degrees(&cycle4(), &pair);
        assert!(d.out_map(&pair).values().all(|&x| x == 1));
        assert!(d.in_map(&pair).values().all(|&x| x == 1));
    }

    #[test]
    fn rejects_out_of_range_edges() {
        let err = DirectedGraph::new(2, vec![Edge::new(0, 2)]).unwrap_err();
        assert!(matches!(err, GraphError::VertexOutOfRange { index: 0, .. }));
    }

    #[test]
    fn adjacency_lists_partition_edges() {
        let g = DirectedGraph::from_pairs([(0, 1), (0, 1), (2, 2), (1, 0)]);
        assert_eq!(g.out_degree(0), 2);
        assert_eq!(g.in_degree(1), 2);
        assert_eq!(g.out_degree(2), 1);
        assert_eq!(g.in_degree(2), 1);
        assert!(g.in_edges(0).all(|e| e.dst == 0));
        let outs: usize = (0..3).map(|v| g.out_degree(v)).sum();
        let ins: usize = (0..3).map(|v| g.in_degree(v)).sum();
        assert_eq!(outs, g.edge_count());
        assert_eq!(ins, g.edge_count());
    }

    #[test]
    fn vertex_set_counts_track_membership() {
        let mut s = VertexSet::empty(5);
        assert!(s.insert(3));
        assert!(!s.insert(3));
        assert!(s.insert(0));
        assert_eq!(s.len(), 2);
        assert!(s.remove(3));
        assert!(!s.remove(3));
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![0]);
        assert!(!s.contains(99));
    }
}
