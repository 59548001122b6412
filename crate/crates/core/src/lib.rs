//! Approximate directed densest subgraph.
//!
//! Given a directed graph, find vertex sets `S`, `T` maximizing
//! `|E(S,T)| / sqrt(|S|·|T|)`. The crate provides:
//!
//! - [`peel`]: the peeling step, the full-information peeling baseline;
//! - [`oracle`]: an exact enumeration oracle for small graphs;
//! - [`stream`]: multi-pass sampled peeling and single-pass peeling over a
//!   randomized edge stream;
//! - [`sweep`]: the geometric sweep over the unknown ratio `c = |S|/|T|`;
//! - [`mpc`]: a round-accounting simulator for the super-linear and near-linear
//!   memory MPC variants;
//! - [`snap`], [`generate`], [`report`], [`experiment`]: SNAP edge-list input,
//!   preferential-attachment generation, CSV reports and experiment orchestration.

pub mod experiment;
pub mod generate;
pub mod graph;
pub mod mpc;
pub mod oracle;
pub mod peel;
pub mod report;
pub mod rng;
pub mod snap;
pub mod stream;
pub mod sweep;

pub use experiment::{run_experiment, GenSpec, InputSource, RunConfig};
pub use generate::gen_pref_attach;
pub use graph::{
    count_cross_edges, density, restricted_degrees, Density, DirectedGraph, Edge,
    RestrictedDegrees, VertexId, VertexSet, VertexSetPair,
};
pub use mpc::{mpc_nearlinear_run, mpc_superlinear_run, MpcConfig, MpcOutcome, RoundLedger};
pub use oracle::{exact_oracle, exact_oracle_capped};
pub use peel::{
    baseline_peel, iteration_bound, parse_ratio, vsets_update, PeelParams, PeelTrace, RatioGuess,
};
pub use report::{compare_reports, Comparison, RunReport, RunRow};
pub use snap::parse_snap_edgelist;
pub use stream::{
    make_stream, multi_pass_run, single_pass_run, EdgeStream, SampleParams, StreamOrder,
};
pub use sweep::{build_grid, run_single, sweep, Algorithm, RunSettings, StreamMode, SweepGrid};
