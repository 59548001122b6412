//! The VSets-Update peeling step and the full-information peeling baseline.
//!
//! One step compares `|S|/|T|` against the ratio guess `c` and removes every
//! vertex of the selected side whose restricted degree is at most `(1+ε)`
//! times that side's average. Survivors sit strictly above `(1+ε)·avg`, so the
//! peeled side shrinks by more than a `(1+ε)` factor and one side empties after
//! at most `ceil(2·ln n / ln(1+ε))` steps.

use std::fmt;

use num_rational::Ratio;
use thiserror::Error;

use crate::graph::{
    Density, DirectedGraph, Edge, RestrictedDegrees, VertexId, VertexSet, VertexSetPair,
};

/// Exact positive rational `|S|/|T|` target.
pub type RatioGuess = Ratio<u64>;

#[derive(Debug, Error, PartialEq)]
pub enum PeelError {
    #[error("ratio guess c must be positive, got {0}")]
    NonPositiveRatio(String),
    #[error("epsilon must lie in (0, 1), got {0}")]
    EpsilonOutOfRange(f64),
    #[error("cannot peel a pair with an empty side (|S| = {s}, |T| = {t})")]
    EmptySide { s: usize, t: usize },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PeelParams {
    c: RatioGuess,
    epsilon: f64,
}

impl PeelParams {
    pub fn new(c: RatioGuess, epsilon: f64) -> Result<Self, PeelError> {
        if *c.numer() == 0 || *c.denom() == 0 {
            return Err(PeelError::NonPositiveRatio(c.to_string()));
        }
        check_epsilon(epsilon)?;
        Ok(PeelParams { c, epsilon })
    }

    /// Converts a float guess to the closest small rational.
    pub fn from_f64(c: f64, epsilon: f64) -> Result<Self, PeelError> {
        PeelParams::new(ratio_from_f64(c)?, epsilon)
    }

    pub fn c(&self) -> RatioGuess {
        self.c
    }

    pub fn c_f64(&self) -> f64 {
        *self.c.numer() as f64 / *self.c.denom() as f64
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// `|S|/|T| ≥ c`, decided by integer cross-multiplication.
    pub fn peels_s(&self, s_len: usize, t_len: usize) -> bool {
        (s_len as u128) * (*self.c.denom() as u128) >= (*self.c.numer() as u128) * (t_len as u128)
    }
}

pub(crate) fn check_epsilon(epsilon: f64) -> Result<(), PeelError> {
    if epsilon > 0.0 && epsilon < 1.0 {
        Ok(())
    } else {
        Err(PeelError::EpsilonOutOfRange(epsilon))
    }
}

pub fn ratio_from_f64(c: f64) -> Result<RatioGuess, PeelError> {
    if !(c.is_finite() && c > 0.0) {
        return Err(PeelError::NonPositiveRatio(c.to_string()));
    }
    let approx = Ratio::<i64>::approximate_float(c)
        .filter(|r| *r.numer() > 0)
        .ok_or_else(|| PeelError::NonPositiveRatio(c.to_string()))?;
    Ok(RatioGuess::new(
        *approx.numer() as u64,
        *approx.denom() as u64,
    ))
}

/// Parses `a/b` exactly or a decimal via [`ratio_from_f64`].
pub fn parse_ratio(text: &str) -> Result<RatioGuess, PeelError> {
    let bad = || PeelError::NonPositiveRatio(text.to_string());
    match text.split_once('/') {
        Some((a, b)) => {
            let a: u64 = a.trim().parse().map_err(|_| bad())?;
            let b: u64 = b.trim().parse().map_err(|_| bad())?;
            if a == 0 || b == 0 {
                return Err(bad());
            }
            Ok(RatioGuess::new(a, b))
        }
        None => ratio_from_f64(text.trim().parse().map_err(|_| bad())?),
    }
}

/// Number of steps after which one side must be empty.
pub fn iteration_bound(n: usize, epsilon: f64) -> usize {
    if n <= 1 {
        return 0;
    }
    (2.0 * (n as f64).ln() / (1.0 + epsilon).ln()).ceil() as usize
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    S,
    T,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::S => "S",
            Side::T => "T",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PeelStep {
    pub iteration: usize,
    pub side: Side,
    pub removed: usize,
    /// Density of the pair after the step, measured on the peeled view.
    pub density_after: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct PeelTrace {
    pub steps: Vec<PeelStep>,
}

impl PeelTrace {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct PeelOutcome {
    pub pair: VertexSetPair,
    pub density: Density,
    pub trace: PeelTrace,
}

pub(crate) struct StepResult {
    pub side: Side,
    pub removed: usize,
    pub cross_after: u64,
}

/// Peels `pair` in place given degrees restricted to it.
///
/// If no vertex is at or below the threshold (only reachable with degrees that
/// did not come from the same edge view as `deg.cross`), the single
/// minimum-degree vertex goes instead.
pub(crate) fn peel_in_place(
    pair: &mut VertexSetPair,
    deg: &RestrictedDegrees,
    params: &PeelParams,
) -> StepResult {
    let (side, set, degrees) = if params.peels_s(pair.s.len(), pair.t.len()) {
        (Side::S, &mut pair.s, &deg.out)
    } else {
        (Side::T, &mut pair.t, &deg.inn)
    };
    pair.cross_edges = None;
    let removed_ids = below_threshold(set, degrees, deg.cross, params.epsilon);
    let mut removed_weight = 0u64;
    for &v in &removed_ids {
        set.remove(v);
        removed_weight += degrees[v as usize];
    }
    StepResult {
        side,
        removed: removed_ids.len(),
        cross_after: deg.cross.saturating_sub(removed_weight),
    }
}

fn below_threshold(set: &VertexSet, degrees: &[u64], cross: u64, epsilon: f64) -> Vec<VertexId> {
    let size = set.len() as f64;
    let limit = (1.0 + epsilon) * cross as f64;
    let picked: Vec<VertexId> = set
        .iter()
        .filter(|&v| degrees[v as usize] as f64 * size <= limit)
        .collect();
    if !picked.is_empty() {
        return picked;
    }
    set.iter()
        .min_by_key(|&v| (degrees[v as usize], v))
        .into_iter()
        .collect()
}

/// One VSets-Update step over `view`, which may be the whole graph or a
/// sampled subgraph. Edges of `view` outside `E(S,T)` are ignored.
pub fn vsets_update(
    view: &[Edge],
    params: &PeelParams,
    pair: &VertexSetPair,
) -> Result<VertexSetPair, PeelError> {
    if pair.either_empty() {
        return Err(PeelError::EmptySide {
            s: pair.s.len(),
            t: pair.t.len(),
        });
    }
    let deg = RestrictedDegrees::from_edges(view, pair);
    let mut next = pair.clone();
    peel_in_place(&mut next, &deg, params);
    Ok(next)
}

/// Supplies restricted degrees to the peeling loop.
pub(crate) trait PeelView {
    fn degrees(&mut self, pair: &VertexSetPair, out: &mut RestrictedDegrees);
}

/// Re-reads every edge on each iteration, like a pass over the input.
pub(crate) struct FullScan<'a>(pub &'a [Edge]);

impl PeelView for FullScan<'_> {
    fn degrees(&mut self, pair: &VertexSetPair, out: &mut RestrictedDegrees) {
        out.recount(self.0, pair);
    }
}

/// Holds edges in memory and drops those that left `E(S,T)`.
pub(crate) struct Compacting(pub Vec<Edge>);

impl PeelView for Compacting {
    fn degrees(&mut self, pair: &VertexSetPair, out: &mut RestrictedDegrees) {
        out.recount_retaining(&mut self.0, pair);
    }
}

/// Peels from `start` until a side empties, keeping the densest pair seen.
/// Ties keep the earlier pair.
pub(crate) fn run_peel<V: PeelView>(
    view: &mut V,
    start: VertexSetPair,
    params: &PeelParams,
) -> PeelOutcome {
    let mut pair = start;
    let mut deg = RestrictedDegrees::default();
    let mut best: Option<(VertexSetPair, Density)> = None;
    let mut trace = PeelTrace::default();
    while !pair.either_empty() {
        view.degrees(&pair, &mut deg);
        let d = Density::from_counts(deg.cross, pair.s.len(), pair.t.len());
        if best.as_ref().is_none_or(|(_, b)| d > *b) {
            best = Some((pair.clone().with_cross_edges(deg.cross), d));
        }
        let step = peel_in_place(&mut pair, &deg, params);
        trace.steps.push(PeelStep {
            iteration: trace.steps.len(),
            side: step.side,
            removed: step.removed,
            density_after: Density::from_counts(step.cross_after, pair.s.len(), pair.t.len())
                .value(),
        });
    }
    let (pair, density) = best.unwrap_or((pair, Density::ZERO));
    PeelOutcome {
        pair,
        density,
        trace,
    }
}

/// Full-information peeling from `(V, V)`: every iteration is one pass over
/// all of `g`'s edges. Returns the densest visited pair with its exact density.
pub fn baseline_peel(g: &DirectedGraph, params: &PeelParams) -> PeelOutcome {
    baseline_peel_over(g.edges(), g.vertex_count(), params)
}

/// [`baseline_peel`] reading `edges` in the given order, e.g. the order of a
/// stream shared with the streaming algorithms. The result does not depend
/// on the order.
pub fn baseline_peel_over(edges: &[Edge], n: usize, params: &PeelParams) -> PeelOutcome {
    if n == 1 {
        let loops = edges.len() as u64;
        return PeelOutcome {
            pair: VertexSetPair::full(1).with_cross_edges(loops),
            density: Density::from_counts(loops, 1, 1),
            trace: PeelTrace::default(),
        };
    }
    run_peel(&mut FullScan(edges), VertexSetPair::full(n), params)
}
