//! Edge streams and the two streaming algorithms: multi-pass sampled peeling
//! and single-pass peeling over a randomized stream.

pub(crate) mod edge_stream;
mod multi_pass;
pub(crate) mod sampling;
mod single_pass;

pub use edge_stream::{make_stream, ordered_edges, EdgeSource, EdgeStream, StreamOrder};
pub use multi_pass::{multi_pass_run, MultiPassOutcome};
pub use sampling::{
    binomial_draw, estimate_cross_edges, sampled_density_estimate, set_sample, thin, SampleError,
    SampleParams, SeenSet, SetSample,
};
pub use single_pass::{single_pass_run, BatchSizing, Progress, SinglePassOutcome, SinglePassRun};
