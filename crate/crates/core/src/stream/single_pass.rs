//! Single-pass peeling over a randomly ordered edge stream.
//!
//! The run keeps `E'`, the part of the current `E(S,T)` seen so far. It reads
//! the stream in batches of `nξ` edges. A batch with few cross edges (or the
//! end of the stream) means the rest of `E(S,T)` fits in memory, so the
//! remainder is folded into `E'` and peeled locally. Otherwise the batch gives
//! an estimate `s` of `|E(S,T)|`, Set-Sample draws `H` at rate
//! `p = nξ / ((1-ε)s)` and one peeling step runs on `H`.
//!
//! [`SinglePassRun`] is a resumable state machine: when its source is
//! temporarily out of edges it returns [`Progress::Starved`] and picks up
//! where it left off on the next [`advance`](SinglePassRun::advance). The MPC
//! simulator uses this to feed the same instance phase by phase.

use std::mem;

use rand::Rng;

use crate::graph::{Density, Edge, RestrictedDegrees, VertexSetPair};
use crate::peel::{peel_in_place, run_peel, Compacting, PeelParams};
use crate::stream::sampling::{binomial_draw, estimate_cross_edges, scaled_density, thin};
use crate::stream::{EdgeSource, EdgeStream, SampleParams, SeenSet};

/// How the per-batch sample budget is sized.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BatchSizing {
    /// `n·ξ` for the whole vertex set.
    AllVertices,
    /// `(|S| + |T|)·ξ` for the live pair, as in the near-linear MPC regime.
    LiveVertices,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Progress {
    /// The source has no edge available now but is not exhausted.
    Starved,
    Finished,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum DrainPurpose {
    /// `p > 1`: the rest of `E(S,T)` is the sample.
    WholeRemainder,
    /// Fold the rest of `E(S,T)` into `E'` and finish locally.
    Fold,
}

#[derive(Debug)]
enum Stage {
    Batch(Vec<Edge>),
    Sample {
        h1: Vec<Edge>,
        h2: Vec<Edge>,
        want: u64,
        p: f64,
    },
    Drain {
        purpose: DrainPurpose,
        got: Vec<Edge>,
    },
    Done,
}

#[derive(Clone, Debug)]
pub struct SinglePassOutcome {
    pub pair: VertexSetPair,
    /// Density of `pair` as the algorithm saw it: `ρ_H/p` for pairs chosen
    /// after a sampled step, exact for pairs from the local finish.
    pub estimate: f64,
    pub peak_edges: usize,
    pub edges_read: usize,
    /// Peeling steps taken on Set-Sample (or whole-remainder) samples.
    pub sampled_steps: usize,
    /// Peeling steps taken in the local finish over `E'`.
    pub local_steps: usize,
    /// Steps forced from outside, e.g. the near-linear MPC flip peel.
    pub external_steps: usize,
}

#[derive(Debug)]
pub struct SinglePassRun<R> {
    params: PeelParams,
    sample: SampleParams,
    sizing: BatchSizing,
    rng: R,
    pair: VertexSetPair,
    pair_scored: bool,
    best: (VertexSetPair, f64),
    seen: SeenSet,
    stage: Stage,
    budget: u64,
    deg: RestrictedDegrees,
    edges_read: usize,
    sampled_steps: usize,
    local_steps: usize,
    external_steps: usize,
}

impl<R: Rng> SinglePassRun<R> {
    pub fn new(
        n: usize,
        params: PeelParams,
        sample: SampleParams,
        sizing: BatchSizing,
        rng: R,
    ) -> Self {
        let pair = VertexSetPair::full(n);
        let mut run = SinglePassRun {
            params,
            sample,
            sizing,
            rng,
            best: (pair.clone(), f64::NEG_INFINITY),
            pair,
            pair_scored: false,
            seen: SeenSet::new(),
            stage: Stage::Batch(Vec::new()),
            budget: 0,
            deg: RestrictedDegrees::default(),
            edges_read: 0,
            sampled_steps: 0,
            local_steps: 0,
            external_steps: 0,
        };
        run.budget = run.current_budget();
        run
    }

    pub fn pair(&self) -> &VertexSetPair {
        &self.pair
    }

    pub fn seen(&self) -> &SeenSet {
        &self.seen
    }

    pub fn is_finished(&self) -> bool {
        matches!(self.stage, Stage::Done)
    }

    fn current_budget(&self) -> u64 {
        match self.sizing {
            BatchSizing::AllVertices => self.sample.n_xi(self.pair.s.universe()),
            BatchSizing::LiveVertices => self.sample.n_xi(self.pair.s.len() + self.pair.t.len()),
        }
        .max(1)
    }

    fn pull<S: EdgeSource + ?Sized>(&mut self, src: &mut S) -> Option<Edge> {
        let e = src.pull()?;
        self.edges_read += 1;
        Some(e)
    }

    fn consider(&mut self, score: f64) {
        if !self.pair.either_empty() && score > self.best.1 {
            self.best = (self.pair.clone(), score);
        }
    }

    /// Runs until the source starves or the run finishes.
    pub fn advance<S: EdgeSource + ?Sized>(&mut self, src: &mut S) -> Progress {
        loop {
            match mem::replace(&mut self.stage, Stage::Done) {
                Stage::Done => return Progress::Finished,
                Stage::Batch(mut batch) => {
                    if self.pair.either_empty() {
                        continue;
                    }
                    let want = (self.budget as usize).saturating_sub(batch.len());
                    batch.reserve(want.min(src.remaining()));
                    let got = src.pull_into(want, &mut batch);
                    self.edges_read += got;
                    if got < want && src.remaining() > 0 {
                        self.seen.observe(batch.len());
                        self.stage = Stage::Batch(batch);
                        return Progress::Starved;
                    }
                    self.seen.observe(batch.len());
                    self.stage = self.close_batch(batch, src.remaining());
                }
                Stage::Sample {
                    mut h1,
                    mut h2,
                    want,
                    p,
                } => {
                    while (h2.len() as u64) < want {
                        match self.pull(src) {
                            Some(e) if self.pair.admits(&e) => h2.push(e),
                            Some(_) => {}
                            None if src.remaining() > 0 => {
                                self.seen.observe(h2.len());
                                self.stage = Stage::Sample { h1, h2, want, p };
                                return Progress::Starved;
                            }
                            None => break,
                        }
                    }
                    self.seen.observe(h2.len());
                    let fresh = h2.len();
                    h1.append(&mut h2);
                    let sample_edges = h1;
                    self.sampled_step(&sample_edges, fresh, p);
                    self.begin_batch();
                }
                Stage::Drain { purpose, mut got } => {
                    loop {
                        match self.pull(src) {
                            Some(e) if self.pair.admits(&e) => got.push(e),
                            Some(_) => {}
                            None if src.remaining() > 0 => {
                                self.seen.observe(got.len());
                                self.stage = Stage::Drain { purpose, got };
                                return Progress::Starved;
                            }
                            None => break,
                        }
                    }
                    self.seen.append(got);
                    match purpose {
                        DrainPurpose::WholeRemainder => {
                            let all = self.seen.take();
                            self.sampled_step(&all, 0, 1.0);
                            let pair = &self.pair;
                            self.seen.extend(all.into_iter().filter(|e| pair.admits(e)));
                            self.stage = Stage::Drain {
                                purpose: DrainPurpose::Fold,
                                got: Vec::new(),
                            };
                        }
                        DrainPurpose::Fold => self.finish_locally(),
                    }
                }
            }
        }
    }

    fn begin_batch(&mut self) {
        self.budget = self.current_budget();
        self.stage = Stage::Batch(Vec::new());
    }

    fn close_batch(&mut self, batch: Vec<Edge>, stream_remaining: usize) -> Stage {
        let total = batch.len();
        let mut qualifying = batch;
        if !self.pair.is_full() {
            let pair = &self.pair;
            qualifying.retain(|e| pair.admits(e));
        }
        let q = qualifying.len();
        if (q as u64) < 2 * self.sample.xi() || stream_remaining == 0 {
            self.seen.append(qualifying);
            return Stage::Drain {
                purpose: DrainPurpose::Fold,
                got: Vec::new(),
            };
        }
        let eps = self.sample.epsilon();
        let s = estimate_cross_edges(
            total,
            q,
            stream_remaining,
            total as u64,
            self.seen.len(),
            eps,
        );
        self.seen.append(qualifying);
        let p = self.budget as f64 / ((1.0 - eps) * s as f64);
        if p > 1.0 {
            return Stage::Drain {
                purpose: DrainPurpose::WholeRemainder,
                got: Vec::new(),
            };
        }
        let h1 = thin(self.seen.edges(), p, &mut self.rng);
        let want = binomial_draw(s - self.seen.len() as u64, p, &mut self.rng);
        Stage::Sample {
            h1,
            h2: Vec::new(),
            want,
            p,
        }
    }

    /// One peeling step on `sample`, whose last `fresh` edges are new stream
    /// edges; afterwards `E' ← (E' ∪ H) ∩ E(S,T)`.
    fn sampled_step(&mut self, sample: &[Edge], fresh: usize, p: f64) {
        if self.pair.either_empty() {
            return;
        }
        self.deg.recount(sample, &self.pair);
        if !self.pair_scored {
            let before = scaled_density(self.deg.cross, &self.pair, p);
            self.consider(before);
        }
        let step = peel_in_place(&mut self.pair, &self.deg, &self.params);
        self.sampled_steps += 1;
        let after = scaled_density(step.cross_after, &self.pair, p);
        self.consider(after);
        self.pair_scored = true;
        let pair = &self.pair;
        self.seen.extend(
            sample[sample.len() - fresh..]
                .iter()
                .copied()
                .filter(|e| pair.admits(e)),
        );
        self.seen.retain_in(&self.pair);
    }

    fn finish_locally(&mut self) {
        let edges = self.seen.take();
        if !self.pair.either_empty() {
            let out = run_peel(&mut Compacting(edges), self.pair.clone(), &self.params);
            self.local_steps += out.trace.len();
            if out.density.value() > self.best.1 {
                self.best = (out.pair, out.density.value());
            }
        }
        self.stage = Stage::Done;
    }

    /// Replaces the live pair with a peeled-down one decided outside the
    /// stream (exact degrees computed by the MPC simulator). Scored pairs are
    /// `(pair, exact density)`. Any half-built sample is abandoned; its fresh
    /// edges stay in `E'`.
    pub(crate) fn apply_external_peel(
        &mut self,
        new_pair: VertexSetPair,
        scored: Vec<(VertexSetPair, Density)>,
        steps: usize,
    ) {
        for (pair, d) in scored {
            if !pair.either_empty() && d.value() > self.best.1 {
                self.best = (pair, d.value());
            }
        }
        self.external_steps += steps;
        self.pair = new_pair;
        self.pair_scored = true;
        let pair = &self.pair;
        match mem::replace(&mut self.stage, Stage::Done) {
            Stage::Sample { h2, .. } => {
                self.seen.extend(h2.into_iter().filter(|e| pair.admits(e)));
                self.seen.retain_in(&self.pair);
                self.begin_batch();
            }
            Stage::Drain { purpose, mut got } => {
                got.retain(|e| pair.admits(e));
                self.seen.retain_in(&self.pair);
                self.stage = Stage::Drain { purpose, got };
            }
            Stage::Batch(batch) => {
                self.seen.retain_in(&self.pair);
                self.budget = self.current_budget();
                self.stage = Stage::Batch(batch);
            }
            Stage::Done => {}
        }
    }

    pub fn outcome(&self) -> SinglePassOutcome {
        let (pair, estimate) = if self.best.1.is_finite() {
            (self.best.0.clone(), self.best.1)
        } else {
            (self.best.0.clone(), 0.0)
        };
        SinglePassOutcome {
            pair,
            estimate,
            peak_edges: self.seen.peak(),
            edges_read: self.edges_read,
            sampled_steps: self.sampled_steps,
            local_steps: self.local_steps,
            external_steps: self.external_steps,
        }
    }
}

/// Runs the single-pass algorithm over one pass of `stream`.
pub fn single_pass_run<R: Rng>(
    stream: &mut EdgeStream,
    n: usize,
    params: &PeelParams,
    sample: &SampleParams,
    rng: R,
) -> SinglePassOutcome {
    let mut run = SinglePassRun::new(n, *params, *sample, BatchSizing::AllVertices, rng);
    let progress = run.advance(stream);
    debug_assert_eq!(progress, Progress::Finished);
    run.outcome()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{density, DirectedGraph};
    use crate::peel::{baseline_peel, RatioGuess};
    use crate::stream::{make_stream, StreamOrder};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn params(c: (u64, u64)) -> PeelParams {
        PeelParams::new(RatioGuess::new(c.0, c.1), 0.2).unwrap()
    }

    fn run(g: &DirectedGraph, c: (u64, u64), f: f64, seed: u64) -> (SinglePassOutcome, EdgeStream) {
        let sample = SampleParams::new(g.vertex_count(), 0.2, f).unwrap();
        let mut stream = make_stream(g, StreamOrder::Shuffled { seed });
        let out = single_pass_run(
            &mut stream,
            g.vertex_count(),
            &params(c),
            &sample,
            ChaCha8Rng::seed_from_u64(seed),
        );
        (out, stream)
    }

    #[test]
    fn small_graph_collapses_to_baseline() {
        let g = DirectedGraph::from_pairs([(0, 1), (0, 2), (1, 2), (2, 0), (3, 1), (3, 2), (0, 3)]);
        for c in [(1, 4), (1, 1), (4, 1)] {
            let base = baseline_peel(&g, &params(c));
            let (sp, _) = run(&g, c, 1.0, 3);
            assert_eq!(sp.pair.s, base.pair.s);
            assert_eq!(sp.pair.t, base.pair.t);
            assert_eq!(sp.estimate, base.density.value());
            assert_eq!(sp.sampled_steps, 0);
        }
    }

    #[test]
    fn edgeless_stream_has_density_zero() {
        let g = DirectedGraph::new(4, vec![]).unwrap();
        let (sp, _) = run(&g, (1, 1), 1.0, 0);
        assert_eq!(sp.estimate, 0.0);
        assert_eq!(sp.edges_read, 0);
    }

    #[test]
    fn sampling_path_reads_each_edge_at_most_once() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let n = 300u32;
        let mut pairs: Vec<(u32, u32)> = (0..30_000)
            .map(|_| (rng.random_range(0..n), rng.random_range(0..n)))
            .collect();
        // Planted dense block so peeling has something to find.
        for _ in 0..6000 {
            pairs.push((rng.random_range(0..20), rng.random_range(20..40)));
        }
        let g = DirectedGraph::from_pairs(pairs);
        for seed in 0..5 {
            let (sp, stream) = run(&g, (1, 1), 0.0005, seed);
            assert!(sp.sampled_steps > 0, "sampling path not exercised");
            assert!(stream.max_reads_per_edge() <= 1);
            assert_eq!(stream.edges_read(), sp.edges_read);
            assert!(sp.peak_edges < g.edge_count());
            assert!(density(&g, &sp.pair).value() > 0.0);
        }
    }

    /// Hands out edges only after `release` is called, like an MPC phase boundary.
    struct Trickle {
        ready: Vec<Edge>,
        held: Vec<Edge>,
    }

    impl Trickle {
        fn release(&mut self) {
            self.ready.extend(self.held.drain(..).rev());
        }
    }

    impl EdgeSource for Trickle {
        fn pull(&mut self) -> Option<Edge> {
            self.ready.pop()
        }

        fn remaining(&self) -> usize {
            self.ready.len() + self.held.len()
        }
    }

    #[test]
    fn resumes_after_starvation_and_external_peel() {
        let g = DirectedGraph::from_pairs([(0, 1), (1, 2), (2, 0), (0, 2), (3, 0), (3, 1)]);
        let sample = SampleParams::new(4, 0.2, 1.0).unwrap();
        let mut run = SinglePassRun::new(
            4,
            params((1, 1)),
            sample,
            BatchSizing::LiveVertices,
            ChaCha8Rng::seed_from_u64(0),
        );
        let mut src = Trickle {
            ready: g.edges()[..3].iter().rev().copied().collect(),
            held: g.edges()[3..].to_vec(),
        };
        assert_eq!(run.advance(&mut src), Progress::Starved);
        assert_eq!(run.outcome().edges_read, 3);

        let peeled = VertexSetPair::from_ids(4, [0, 1, 2], [0, 1, 2]);
        let exact = density(&g, &peeled);
        run.apply_external_peel(peeled.clone(), vec![(peeled.clone(), exact)], 1);
        assert!(run.seen().edges().iter().all(|e| peeled.admits(e)));

        src.release();
        assert_eq!(run.advance(&mut src), Progress::Finished);
        let out = run.outcome();
        assert_eq!(out.edges_read, g.edge_count());
        assert_eq!(out.external_steps, 1);
        assert!(out.estimate >= exact.value());
        assert!(out.pair.s.iter().all(|v| v < 3));
    }
}
