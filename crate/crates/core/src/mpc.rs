//! Round-accounting simulator for the MPC variants of single-pass peeling.
//!
//! A coordinator machine runs one [`SinglePassRun`]. The rest of the edges
//! live in `E_rel`, the relevant set, spread over the other machines. Each
//! phase intersects `E_rel` with the current `E(S,T)`, moves a uniform sample
//! of one machine's worth of edges to the coordinator, and lets the run
//! consume them as the next stretch of its stream. Once `E_rel` fits in one
//! machine it is shipped whole and the run finishes locally.
//!
//! Rounds are charged with a cost model rather than simulated machines: every
//! global sort costs [`MpcConfig::sort_round_cost`] rounds and a gather onto
//! the coordinator costs one.
//!
//! The near-linear regime adds, at the start of each phase, exact restricted
//! degrees (one sort) and a run of peeling steps on the side the ratio test
//! selects until the test flips. Peeling only `S` leaves every `|E(u,T)|`
//! unchanged, so those steps need no fresh sample.

use rand::{Rng, SeedableRng};
use thiserror::Error;

use crate::graph::{restricted_degrees, Density, DirectedGraph, Edge, VertexSetPair};
use crate::peel::{peel_in_place, PeelParams};
use crate::rng::{derive_seed, RunRng};
use crate::stream::{BatchSizing, EdgeSource, Progress, SampleParams, SinglePassRun};

#[derive(Debug, Error, PartialEq)]
pub enum MpcError {
    #[error("memory exponent mu must lie in (0, 1), got {0}")]
    BadExponent(f64),
    #[error("polylog memory budget must be positive, got {0}")]
    BadBudget(f64),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Regime {
    /// `n^(1+mu)` words per machine.
    Superlinear { mu: f64 },
    /// `n·polylog_budget` words per machine.
    Nearlinear { polylog_budget: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MpcConfig {
    pub regime: Regime,
    pub sort_round_cost: u32,
}

impl MpcConfig {
    pub fn superlinear(mu: f64) -> Result<Self, MpcError> {
        if !(mu > 0.0 && mu < 1.0) {
            return Err(MpcError::BadExponent(mu));
        }
        Ok(MpcConfig {
            regime: Regime::Superlinear { mu },
            sort_round_cost: 1,
        })
    }

    pub fn nearlinear(polylog_budget: f64) -> Result<Self, MpcError> {
        if !(polylog_budget.is_finite() && polylog_budget > 0.0) {
            return Err(MpcError::BadBudget(polylog_budget));
        }
        Ok(MpcConfig {
            regime: Regime::Nearlinear { polylog_budget },
            sort_round_cost: 1,
        })
    }

    /// Words per machine for an `n`-vertex graph, never below `n`.
    pub fn machine_memory(&self, n: usize) -> usize {
        let nf = n as f64;
        let words = match self.regime {
            Regime::Superlinear { mu } => nf.powf(1.0 + mu),
            Regime::Nearlinear { polylog_budget } => nf * polylog_budget,
        };
        (words.ceil() as usize).max(n).max(1)
    }
}

/// `ln²(n)/ε³`, the shape of the single-pass memory bound.
pub fn default_polylog_budget(n: usize, epsilon: f64) -> f64 {
    let ln = (n.max(2) as f64).ln();
    ln * ln / epsilon.powi(3)
}

/// Edges not yet handed to the coordinator. Only ever filtered or drawn
/// from, never grown.
#[derive(Clone, Debug)]
pub struct RelevantEdgeSet {
    edges: Vec<Edge>,
}

impl RelevantEdgeSet {
    pub fn new(edges: Vec<Edge>) -> Self {
        RelevantEdgeSet { edges }
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

    pub fn intersect(&mut self, pair: &VertexSetPair) {
        self.edges.retain(|e| pair.admits(e));
    }

    /// Removes `k` edges chosen uniformly without replacement, returned in
    /// uniformly random order.
    pub fn draw<R: Rng + ?Sized>(&mut self, k: usize, rng: &mut R) -> Vec<Edge> {
        let len = self.edges.len();
        let k = k.min(len);
        for i in 0..k {
            let j = rng.random_range(0..len - i);
            self.edges.swap(j, len - 1 - i);
        }
        self.edges.split_off(len - k)
    }

    pub fn take_all<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Vec<Edge> {
        let k = self.edges.len();
        self.draw(k, rng)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhaseLog {
    /// Edges moved to the coordinator this phase.
    pub fetched: usize,
    pub rel_before: usize,
    pub rel_after: usize,
    /// The coordinator's run ended in this phase.
    pub local_finish: bool,
    pub charged: u32,
    /// Peeling steps taken on exact degrees at the start of the phase.
    pub flip_steps: usize,
    /// Pair sizes when the phase ended.
    pub s_size: usize,
    pub t_size: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RoundLedger {
    pub rounds: u32,
    pub phases: u32,
    pub log: Vec<PhaseLog>,
}

impl RoundLedger {
    fn record(&mut self, phase: PhaseLog) {
        self.rounds += phase.charged;
        self.phases += 1;
        self.log.push(phase);
    }
}

#[derive(Clone, Debug)]
pub struct MpcOutcome {
    pub pair: VertexSetPair,
    /// The density the coordinator's run assigned to `pair`.
    pub estimate: f64,
    pub ledger: RoundLedger,
    /// Largest edge set the coordinator's run retained.
    pub peak_edges: usize,
    pub machine_memory: usize,
}

/// The coordinator's view of the stream: the edges moved over so far, with
/// the rest of `E_rel` still to come.
struct Feed {
    buffer: Vec<Edge>,
    pos: usize,
    pending: usize,
}

impl EdgeSource for Feed {
    fn pull(&mut self) -> Option<Edge> {
        let e = *self.buffer.get(self.pos)?;
        self.pos += 1;
        Some(e)
    }

    fn remaining(&self) -> usize {
        self.buffer.len() - self.pos + self.pending
    }
}

pub fn mpc_superlinear_run(
    g: &DirectedGraph,
    params: &PeelParams,
    sample: &SampleParams,
    cfg: &MpcConfig,
    seed: u64,
) -> MpcOutcome {
    simulate(g, params, sample, cfg, seed, false)
}

pub fn mpc_nearlinear_run(
    g: &DirectedGraph,
    params: &PeelParams,
    sample: &SampleParams,
    cfg: &MpcConfig,
    seed: u64,
) -> MpcOutcome {
    simulate(g, params, sample, cfg, seed, true)
}

fn simulate(
    g: &DirectedGraph,
    params: &PeelParams,
    sample: &SampleParams,
    cfg: &MpcConfig,
    seed: u64,
    flip_peel: bool,
) -> MpcOutcome {
    let n = g.vertex_count();
    let memory = cfg.machine_memory(n);
    let sort = cfg.sort_round_cost;
    let index = params.c_f64().to_bits();
    let mut draw_rng = RunRng::seed_from_u64(derive_seed(seed, "mpc-draw", index));
    let coins = RunRng::seed_from_u64(derive_seed(seed, "mpc-coins", index));
    let sizing = if flip_peel {
        BatchSizing::LiveVertices
    } else {
        BatchSizing::AllVertices
    };
    let mut run = SinglePassRun::new(n, *params, *sample, sizing, coins);
    let mut rel = RelevantEdgeSet::new(g.edges().to_vec());
    let mut ledger = RoundLedger::default();

    while !run.is_finished() {
        let rel_before = rel.len();
        let mut charged = 0;
        let mut flip_steps = 0;
        if flip_peel && !run.pair().either_empty() {
            charged += sort;
            let (pair, scored, steps) = peel_until_flip(g, run.pair(), params);
            flip_steps = steps;
            if steps > 0 {
                run.apply_external_peel(pair, scored, steps);
            }
        }
        rel.intersect(run.pair());
        charged += sort;

        let fits = rel.len() <= memory;
        let batch = if fits {
            charged += 1;
            rel.take_all(&mut draw_rng)
        } else {
            charged += 2 * sort;
            rel.draw(memory, &mut draw_rng)
        };
        let mut feed = Feed {
            buffer: batch,
            pos: 0,
            pending: rel.len(),
        };
        let progress = run.advance(&mut feed);
        debug_assert!(!fits || progress == Progress::Finished);
        let (s_size, t_size) = run.pair().sizes();
        ledger.record(PhaseLog {
            fetched: feed.buffer.len(),
            rel_before,
            rel_after: rel.len(),
            local_finish: progress == Progress::Finished,
            charged,
            flip_steps,
            s_size,
            t_size,
        });
    }

    let out = run.outcome();
    MpcOutcome {
        pair: out.pair,
        estimate: out.estimate,
        ledger,
        peak_edges: out.peak_edges,
        machine_memory: memory,
    }
}

/// Peels the side the ratio test selects, on exact degrees, until the test
/// selects the other side or that side empties. Returns the final pair, every
/// pair visited with its exact density, and the number of steps.
fn peel_until_flip(
    g: &DirectedGraph,
    start: &VertexSetPair,
    params: &PeelParams,
) -> (VertexSetPair, Vec<(VertexSetPair, Density)>, usize) {
    let mut pair = start.clone();
    let mut deg = restricted_degrees(g, &pair);
    let side = params.peels_s(pair.s.len(), pair.t.len());
    let mut scored = vec![(
        pair.clone(),
        Density::from_counts(deg.cross, pair.s.len(), pair.t.len()),
    )];
    let mut steps = 0;
    loop {
        let step = peel_in_place(&mut pair, &deg, params);
        steps += 1;
        deg.cross = step.cross_after;
        scored.push((
            pair.clone(),
            Density::from_counts(deg.cross, pair.s.len(), pair.t.len()),
        ));
        if pair.either_empty() || params.peels_s(pair.s.len(), pair.t.len()) != side {
            break;
        }
    }
    (pair, scored, steps)
}
