use rand::Rng;

use crate::graph::{Density, Edge, RestrictedDegrees, VertexSetPair};
use crate::peel::{peel_in_place, PeelParams};
use crate::stream::{EdgeStream, SampleParams};

#[derive(Clone, Debug)]
pub struct MultiPassOutcome {
    pub pair: VertexSetPair,
    pub density: Density,
    pub passes: u32,
    pub iterations: usize,
    /// Largest sample held at once.
    pub peak_edges: usize,
}

/// Multi-pass sampled peeling. Each iteration makes a counting pass for
/// `|E(S,T)|` (which also gives the exact density of the current pair) and a
/// sampling pass keeping each cross edge with probability
/// `min(nξ / ((1-ε)|E(S,T)|), 1)`, then peels on the sample.
pub fn multi_pass_run<R: Rng + ?Sized>(
    stream: &mut EdgeStream,
    n: usize,
    params: &PeelParams,
    sample: &SampleParams,
    rng: &mut R,
) -> MultiPassOutcome {
    let mut pair = VertexSetPair::full(n);
    let mut best: Option<(VertexSetPair, Density)> = None;
    let mut passes = 0u32;
    let mut iterations = 0usize;
    let mut peak = 0usize;
    let mut started = false;
    let mut h: Vec<Edge> = Vec::new();
    let mut deg = RestrictedDegrees::default();
    let n_xi = sample.n_xi(n) as f64;

    while !pair.either_empty() {
        if started {
            stream.reset();
        }
        started = true;
        let cross = stream.drain_pass().filter(|e| pair.admits(e)).count() as u64;
        passes += 1;
        let d = Density::from_counts(cross, pair.s.len(), pair.t.len());
        if best.as_ref().is_none_or(|(_, b)| d > *b) {
            best = Some((pair.clone().with_cross_edges(cross), d));
        }

        let p = if cross == 0 {
            1.0
        } else {
            (n_xi / ((1.0 - sample.epsilon()) * cross as f64)).min(1.0)
        };
        stream.reset();
        h.clear();
        for e in stream.drain_pass() {
            if pair.admits(&e) && (p >= 1.0 || rng.random_bool(p)) {
                h.push(e);
            }
        }
        passes += 1;
        peak = peak.max(h.len());

        deg.recount(&h, &pair);
        peel_in_place(&mut pair, &deg, params);
        iterations += 1;
    }

    let (pair, density) = best.unwrap_or((pair, Density::ZERO));
    MultiPassOutcome {
        pair,
        density,
        passes,
        iterations,
        peak_edges: peak,
    }
}
