//! Exact densest pair by enumeration, for checking approximations on small graphs.
//!
//! For a fixed `S` the best `T` of size `t` is the `t` vertices with the most
//! in-edges from `S`: swapping a member of `T` for an outsider with a higher
//! `|E(S,v)|` raises the numerator and leaves the denominator alone. So it is
//! enough to enumerate all `S` and, per `S`, every prefix of the in-degree order.

use thiserror::Error;

use crate::graph::{Density, DirectedGraph, VertexId, VertexSetPair};

pub const DEFAULT_ORACLE_CAP: usize = 20;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("exact oracle is limited to {cap} vertices, graph has {n}")]
    TooLarge { n: usize, cap: usize },
}

pub fn exact_oracle(g: &DirectedGraph) -> Result<(VertexSetPair, Density), OracleError> {
    exact_oracle_capped(g, DEFAULT_ORACLE_CAP)
}

pub fn exact_oracle_capped(
    g: &DirectedGraph,
    cap: usize,
) -> Result<(VertexSetPair, Density), OracleError> {
    let n = g.vertex_count();
    if n > cap || n >= 32 {
        return Err(OracleError::TooLarge { n, cap });
    }
    if n == 0 {
        return Ok((VertexSetPair::full(0), Density::ZERO));
    }

    // in_from_s[v] = |E(S, v)| for the current S, maintained along a Gray code.
    let mut in_from_s = vec![0u64; n];
    let mut sorted = vec![0u64; n];
    let mut best = (f64::NEG_INFINITY, 0u32, 0usize);
    let mut mask: u32 = 0;
    for k in 1u32..(1u32 << n) {
        let flip = k.trailing_zeros();
        let adding = mask & (1 << flip) == 0;
        mask ^= 1 << flip;
        for e in g.out_edges(flip as VertexId) {
            let slot = &mut in_from_s[e.dst as usize];
            if adding {
                *slot += 1;
            } else {
                *slot -= 1;
            }
        }
        let s_len = mask.count_ones() as f64;
        sorted.copy_from_slice(&in_from_s);
        sorted.sort_unstable_by(|a, b| b.cmp(a));
        let mut cross = 0u64;
        for (i, &d) in sorted.iter().enumerate() {
            cross += d;
            let value = cross as f64 / (s_len * (i + 1) as f64).sqrt();
            if value > best.0 {
                best = (value, mask, i + 1);
            }
        }
    }

    let (_, mask, t_len) = best;
    let s_ids: Vec<VertexId> = (0..n as VertexId)
        .filter(|v| mask & (1 << v) != 0)
        .collect();
    let mut by_in: Vec<(u64, VertexId)> = (0..n as VertexId)
        .map(|v| {
            let d = g.in_edges(v).filter(|e| mask & (1 << e.src) != 0).count() as u64;
            (d, v)
        })
        .collect();
    by_in.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    let cross: u64 = by_in[..t_len].iter().map(|&(d, _)| d).sum();
    let pair = VertexSetPair::from_ids(n, s_ids, by_in[..t_len].iter().map(|&(_, v)| v))
        .with_cross_edges(cross);
    let density = Density::from_counts(cross, pair.s.len(), pair.t.len());
    Ok((pair, density))
}
