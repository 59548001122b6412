//! Sweeping the ratio guess `c` over a geometric grid when `|S*|/|T*|` is
//! unknown, and dispatching one algorithm per grid point.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{count_cross_edges, Density, DirectedGraph, Edge, VertexSetPair};
use crate::mpc::{
    default_polylog_budget, mpc_nearlinear_run, mpc_superlinear_run, MpcConfig, MpcError,
};
use crate::oracle::{exact_oracle, OracleError};
use crate::peel::{baseline_peel_over, ratio_from_f64, PeelError, PeelParams, RatioGuess};
use crate::rng::derive_rng;
use crate::stream::{
    multi_pass_run, ordered_edges, single_pass_run, EdgeStream, SampleError, SampleParams,
    StreamOrder,
};

#[derive(Debug, Error, PartialEq)]
pub enum SweepError {
    #[error("sweep factor delta must be greater than 1, got {0}")]
    BadDelta(f64),
    #[error("the exact oracle does not take a ratio guess and cannot be swept")]
    NotSweepable,
}

#[derive(Debug, Error, PartialEq)]
pub enum RunError {
    #[error(transparent)]
    Peel(#[from] PeelError),
    #[error(transparent)]
    Sample(#[from] SampleError),
    #[error(transparent)]
    Mpc(#[from] MpcError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// Ratio guesses `δ^i / n` for `i = 0, 1, ...` up to the first value `≥ n`.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepGrid {
    pub delta: f64,
    pub values: Vec<RatioGuess>,
}

impl SweepGrid {
    /// A grid holding one value, for runs with a fixed `c`.
    pub fn single(c: RatioGuess) -> Self {
        SweepGrid {
            delta: f64::NAN,
            values: vec![c],
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values_f64(&self) -> Vec<f64> {
        self.values.iter().map(|&c| ratio_to_f64(c)).collect()
    }
}

pub fn ratio_to_f64(c: RatioGuess) -> f64 {
    *c.numer() as f64 / *c.denom() as f64
}

pub fn build_grid(n: usize, delta: f64) -> Result<SweepGrid, SweepError> {
    if !(delta.is_finite() && delta > 1.0) {
        return Err(SweepError::BadDelta(delta));
    }
    let n = n.max(1);
    let n_sq = (n as u128) * (n as u128);
    let mut values = Vec::new();
    if delta.fract() == 0.0 && delta <= u32::MAX as f64 {
        // Integer factor: every grid point is an exact fraction.
        let d = delta as u128;
        let mut power: u128 = 1;
        loop {
            values.push(RatioGuess::new(power as u64, n as u64));
            if power >= n_sq {
                break;
            }
            power *= d;
        }
    } else {
        let nf = n as f64;
        let mut i = 0;
        loop {
            let c = delta.powi(i) / nf;
            values.push(ratio_from_f64(c).expect("grid values are positive"));
            if c * nf >= nf * nf * (1.0 - 1e-12) {
                break;
            }
            i += 1;
        }
    }
    Ok(SweepGrid { delta, values })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Baseline,
    MultiPass,
    SinglePass,
    Exact,
    MpcSuper,
    MpcNear,
}

impl Algorithm {
    pub const ALL: [Algorithm; 6] = [
        Algorithm::Baseline,
        Algorithm::MultiPass,
        Algorithm::SinglePass,
        Algorithm::Exact,
        Algorithm::MpcSuper,
        Algorithm::MpcNear,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Algorithm::Baseline => "baseline",
            Algorithm::MultiPass => "multi-pass",
            Algorithm::SinglePass => "single-pass",
            Algorithm::Exact => "exact",
            Algorithm::MpcSuper => "mpc-super",
            Algorithm::MpcNear => "mpc-near",
        }
    }

    /// Whether reports carry a retained-edge count for this algorithm.
    pub fn tracks_memory(self) -> bool {
        !matches!(self, Algorithm::Baseline | Algorithm::Exact)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("unknown algorithm {0:?}")]
pub struct UnknownAlgorithm(pub String);

impl FromStr for Algorithm {
    type Err = UnknownAlgorithm;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.label() == s)
            .ok_or_else(|| UnknownAlgorithm(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StreamMode {
    Given,
    Shuffled,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunSettings {
    pub epsilon: f64,
    pub f: f64,
    pub seed: u64,
    pub stream: StreamMode,
    pub mpc_mu: f64,
    /// Near-linear per-machine budget over `n`; `None` means `ln²(n)/ε³`.
    pub polylog_budget: Option<f64>,
    pub sort_round_cost: u32,
    /// Worker threads for sweeps; `None` uses rayon's default.
    pub threads: Option<usize>,
}

impl Default for RunSettings {
    fn default() -> Self {
        RunSettings {
            epsilon: 0.2,
            f: 1.0,
            seed: 0,
            stream: StreamMode::Shuffled,
            mpc_mu: 0.5,
            polylog_budget: None,
            sort_round_cost: 1,
            threads: None,
        }
    }
}

impl RunSettings {
    pub fn stream_order(&self) -> StreamOrder {
        match self.stream {
            StreamMode::Given => StreamOrder::AsGiven,
            StreamMode::Shuffled => StreamOrder::Shuffled { seed: self.seed },
        }
    }

    fn mpc_config(&self, algo: Algorithm, n: usize) -> Result<MpcConfig, MpcError> {
        let mut cfg = if algo == Algorithm::MpcSuper {
            MpcConfig::superlinear(self.mpc_mu)?
        } else {
            let budget = self
                .polylog_budget
                .unwrap_or_else(|| default_polylog_budget(n, self.epsilon));
            MpcConfig::nearlinear(budget)?
        };
        cfg.sort_round_cost = self.sort_round_cost;
        Ok(cfg)
    }
}

#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub c: RatioGuess,
    pub pair: VertexSetPair,
    /// Exact density of `pair`, measured after the run.
    pub density: Density,
    /// Density the algorithm itself reported, when it only had an estimate.
    pub estimate: Option<f64>,
    pub peak_edges: Option<usize>,
    pub passes_or_rounds: u64,
    pub wall: Duration,
}

impl RunOutcome {
    pub fn wall_ms(&self) -> f64 {
        self.wall.as_secs_f64() * 1e3
    }
}

/// Runs `algo` once with ratio guess `c`. `edges` is the stream order shared
/// by all runs of a sweep (see [`ordered_edges`]); the baseline reads it too,
/// so timings compare passes over the same sequence.
pub fn run_single(
    g: &DirectedGraph,
    algo: Algorithm,
    c: RatioGuess,
    settings: &RunSettings,
    edges: &Arc<[Edge]>,
) -> Result<RunOutcome, RunError> {
    let n = g.vertex_count();
    let params = PeelParams::new(c, settings.epsilon)?;
    let sample = SampleParams::new(n, settings.epsilon, settings.f)?;
    let coins = derive_rng(settings.seed, algo.label(), ratio_to_f64(c).to_bits());

    let start = Instant::now();
    let (pair, estimate, peak, passes) = match algo {
        Algorithm::Baseline => {
            let out = baseline_peel_over(edges, n, &params);
            (out.pair, None, None, out.trace.len() as u64)
        }
        Algorithm::MultiPass => {
            let mut stream = EdgeStream::new(edges.clone());
            let mut rng = coins;
            let out = multi_pass_run(&mut stream, n, &params, &sample, &mut rng);
            (out.pair, None, Some(out.peak_edges), out.passes as u64)
        }
        Algorithm::SinglePass => {
            let mut stream = EdgeStream::new(edges.clone());
            let out = single_pass_run(&mut stream, n, &params, &sample, coins);
            debug_assert!(stream.max_reads_per_edge() <= 1);
            (out.pair, Some(out.estimate), Some(out.peak_edges), 1)
        }
        Algorithm::Exact => {
            let (pair, _) = exact_oracle(g)?;
            (pair, None, None, 1)
        }
        Algorithm::MpcSuper | Algorithm::MpcNear => {
            let cfg = settings.mpc_config(algo, n)?;
            let out = if algo == Algorithm::MpcSuper {
                mpc_superlinear_run(g, &params, &sample, &cfg, settings.seed)
            } else {
                mpc_nearlinear_run(g, &params, &sample, &cfg, settings.seed)
            };
            (
                out.pair,
                Some(out.estimate),
                Some(out.peak_edges),
                out.ledger.rounds as u64,
            )
        }
    };
    let wall = start.elapsed();

    let cross = count_cross_edges(g, &pair);
    let density = Density::from_counts(cross, pair.s.len(), pair.t.len());
    Ok(RunOutcome {
        c,
        pair: pair.with_cross_edges(cross),
        density,
        estimate,
        peak_edges: peak,
        passes_or_rounds: passes,
        wall,
    })
}

#[derive(Debug)]
pub struct SweepRow {
    pub c: RatioGuess,
    pub result: Result<RunOutcome, RunError>,
}

#[derive(Debug)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    /// Index of the densest successful row; ties go to the smaller `c`.
    pub best: Option<usize>,
}

impl SweepResult {
    pub fn best(&self) -> Option<&RunOutcome> {
        self.best.and_then(|i| self.rows[i].result.as_ref().ok())
    }
}

/// Runs `algo` once per grid value. A failing run becomes an error row; the
/// other rows are unaffected.
pub fn sweep(
    g: &DirectedGraph,
    algo: Algorithm,
    grid: &SweepGrid,
    settings: &RunSettings,
) -> Result<SweepResult, SweepError> {
    if algo == Algorithm::Exact {
        return Err(SweepError::NotSweepable);
    }
    let edges = ordered_edges(g, settings.stream_order());
    let run_all = || -> Vec<SweepRow> {
        grid.values
            .par_iter()
            .map(|&c| SweepRow {
                c,
                result: run_single(g, algo, c, settings, &edges),
            })
            .collect()
    };
    let rows = match settings.threads {
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k.max(1))
            .build()
            .expect("thread pool")
            .install(run_all),
        None => run_all(),
    };
    Ok(SweepResult {
        best: argmax(&rows),
        rows,
    })
}

fn argmax(rows: &[SweepRow]) -> Option<usize> {
    let mut best: Option<(usize, Density, RatioGuess)> = None;
    for (i, row) in rows.iter().enumerate() {
        if let Ok(out) = &row.result {
            let better = match best {
                None => true,
                Some((_, d, c)) => out.density > d || (out.density == d && row.c < c),
            };
            if better {
                best = Some((i, out.density, row.c));
            }
        }
    }
    best.map(|(i, _, _)| i)
}
