//! Sampling primitives shared by the streaming algorithms: the `ξ` threshold,
//! the retained-edge set, Set-Sample and the cross-edge estimate.

use rand::Rng;
use rand_distr::{Binomial, Distribution};
use thiserror::Error;

use crate::graph::{Edge, VertexSetPair};
use crate::peel::{check_epsilon, PeelError};
use crate::stream::EdgeSource;

#[derive(Debug, Error, PartialEq)]
pub enum SampleError {
    #[error(transparent)]
    Peel(#[from] PeelError),
    #[error("xi scale factor f must be positive and finite, got {0}")]
    BadScale(f64),
    #[error("sampling probability must lie in (0, 1], got {0}")]
    BadProbability(f64),
    #[error("estimate s = {s} is below the {seen} edges already retained")]
    EstimateBelowSeen { s: u64, seen: usize },
}

/// Per-vertex sample threshold `ξ = ceil(f · 60 · ln n / ε²)`, at least 1.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SampleParams {
    epsilon: f64,
    xi: u64,
    f: f64,
}

impl SampleParams {
    pub const XI_CONSTANT: f64 = 60.0;

    pub fn new(n: usize, epsilon: f64, f: f64) -> Result<Self, SampleError> {
        check_epsilon(epsilon)?;
        if !(f.is_finite() && f > 0.0) {
            return Err(SampleError::BadScale(f));
        }
        let ln_n = (n.max(1) as f64).ln();
        let xi = (f * Self::XI_CONSTANT * ln_n / (epsilon * epsilon)).ceil() as u64;
        Ok(SampleParams {
            epsilon,
            xi: xi.max(1),
            f,
        })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn xi(&self) -> u64 {
        self.xi
    }

    pub fn f(&self) -> f64 {
        self.f
    }

    /// Sample budget `n·ξ` for `n` live vertices.
    pub fn n_xi(&self, n: usize) -> u64 {
        (n as u64).saturating_mul(self.xi)
    }
}

/// Edges of the current `E(S,T)` retained in memory, with a high-water mark.
#[derive(Clone, Debug, Default)]
pub struct SeenSet {
    edges: Vec<Edge>,
    peak: usize,
}

impl SeenSet {
    pub fn new() -> Self {
        SeenSet::default()
    }

    pub fn from_edges(edges: Vec<Edge>) -> Self {
        let peak = edges.len();
        SeenSet { edges, peak }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn peak(&self) -> usize {
        self.peak
    }

    pub fn extend<I: IntoIterator<Item = Edge>>(&mut self, edges: I) {
        self.edges.extend(edges);
        self.observe(0);
    }

    /// Takes ownership of `edges`, avoiding a copy when the set is empty.
    pub fn append(&mut self, mut edges: Vec<Edge>) {
        if self.edges.is_empty() {
            self.edges = edges;
        } else {
            self.edges.append(&mut edges);
        }
        self.observe(0);
    }

    /// Drops everything outside `E(S,T)` for the given pair.
    pub fn retain_in(&mut self, pair: &VertexSetPair) {
        self.edges.retain(|e| pair.admits(e));
    }

    /// Records a moment where `extra` edges are held alongside the set.
    pub fn observe(&mut self, extra: usize) {
        self.peak = self.peak.max(self.edges.len() + extra);
    }

    pub(crate) fn take(&mut self) -> Vec<Edge> {
        std::mem::take(&mut self.edges)
    }
}

/// Keeps each retained edge independently with probability `p`.
pub fn thin<R: Rng + ?Sized>(edges: &[Edge], p: f64, rng: &mut R) -> Vec<Edge> {
    if p >= 1.0 {
        return edges.to_vec();
    }
    edges
        .iter()
        .copied()
        .filter(|_| rng.random_bool(p))
        .collect()
}

/// Draws `x ~ Binomial(trials, p)`.
pub fn binomial_draw<R: Rng + ?Sized>(trials: u64, p: f64, rng: &mut R) -> u64 {
    if trials == 0 || p <= 0.0 {
        return 0;
    }
    if p >= 1.0 {
        return trials;
    }
    Binomial::new(trials, p)
        .expect("p checked to lie in (0, 1)")
        .sample(rng)
}

/// Output of [`set_sample`].
#[derive(Clone, Debug, Default)]
pub struct SetSample {
    /// Retained edges that survived `p`-thinning.
    pub h1: Vec<Edge>,
    /// Fresh qualifying stream edges.
    pub h2: Vec<Edge>,
    /// The binomial draw `x`.
    pub requested: u64,
    /// The stream ran out before `x` qualifying edges arrived.
    pub exhausted: bool,
    /// Non-qualifying stream edges skipped (and discarded) on the way.
    pub skipped: usize,
}

impl SetSample {
    pub fn len(&self) -> usize {
        self.h1.len() + self.h2.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn edges(&self) -> impl Iterator<Item = &Edge> {
        self.h1.iter().chain(&self.h2)
    }
}

/// Samples `E(S,T)` at rate `p` using the retained set plus the unread stream:
/// each retained edge is kept with probability `p`, then the next
/// `x ~ Binomial(s - |E'|, p)` qualifying stream edges are taken.
pub fn set_sample<R: Rng + ?Sized, S: EdgeSource + ?Sized>(
    seen: &SeenSet,
    pair: &VertexSetPair,
    p: f64,
    s: u64,
    stream: &mut S,
    rng: &mut R,
) -> Result<SetSample, SampleError> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(SampleError::BadProbability(p));
    }
    let unseen = s
        .checked_sub(seen.len() as u64)
        .ok_or(SampleError::EstimateBelowSeen {
            s,
            seen: seen.len(),
        })?;
    let mut out = SetSample {
        h1: thin(seen.edges(), p, rng),
        requested: binomial_draw(unseen, p, rng),
        ..SetSample::default()
    };
    while (out.h2.len() as u64) < out.requested {
        match stream.pull() {
            Some(e) if pair.admits(&e) => out.h2.push(e),
            Some(_) => out.skipped += 1,
            None => {
                out.exhausted = true;
                break;
            }
        }
    }
    Ok(out)
}

/// Estimate of `|E(S,T)|` from a batch:
/// `floor((1-ε)·(|E_A(S,T)|/|E_A|)·(|E_stream| + nξ) + |E'|)`, clamped to at
/// least the `seen_size + |E_A(S,T)|` edges already in hand.
pub fn estimate_cross_edges(
    batch_total: usize,
    batch_qualifying: usize,
    stream_remaining: usize,
    n_xi: u64,
    seen_size: usize,
    epsilon: f64,
) -> u64 {
    let floor = (seen_size + batch_qualifying) as u64;
    if batch_total == 0 {
        return floor;
    }
    let fraction = batch_qualifying as f64 / batch_total as f64;
    let raw =
        (1.0 - epsilon) * fraction * (stream_remaining as f64 + n_xi as f64) + seen_size as f64;
    (raw.floor() as u64).max(floor)
}

/// `|E_H(S,T)| / (p·sqrt(|S||T|))`, the density of a `p`-sample scaled back up.
pub fn sampled_density_estimate(h: &[Edge], pair: &VertexSetPair, p: f64) -> f64 {
    if pair.either_empty() {
        return 0.0;
    }
    let hits = h.iter().filter(|e| pair.admits(e)).count();
    scaled_density(hits as u64, pair, p)
}

pub(crate) fn scaled_density(hits: u64, pair: &VertexSetPair, p: f64) -> f64 {
    if pair.either_empty() {
        return 0.0;
    }
    hits as f64 / (p * ((pair.s.len() as f64) * (pair.t.len() as f64)).sqrt())
}
