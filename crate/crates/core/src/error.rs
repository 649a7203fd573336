use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    /// A negative cycle reachable from the source; `cycle` lists its vertices in order.
    #[error("negative cycle reachable from source: {cycle:?}")]
    NegativeCycle { cycle: Vec<usize> },

    #[error("distance arithmetic overflowed")]
    Overflow,

    #[error("edge index {edge} out of range for graph with {edge_count} edges")]
    EdgeOutOfRange { edge: usize, edge_count: usize },

    #[error("schedule was built for graph {found}, not {expected}")]
    ScheduleMismatch { expected: String, found: String },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    /// The schedule fails on the 0/1 weighting whose zero-weight path is `witness_path`.
    #[error("schedule is not guaranteed correct; it fails on zero-weight path {witness_path:?}")]
    NotGuaranteedCorrect { witness_path: Vec<usize> },

    #[error("malformed routing request: {0}")]
    MalformedRequest(String),

    #[error("routing failed: {0}")]
    RoutingFailed(String),

    #[error("capacity {capacity} exceeds brute-force limit {limit}")]
    CapacityGuard { capacity: usize, limit: usize },

    #[error("infeasible budget: {0}")]
    Infeasible(String),

    #[error("trial with seed {seed} failed: {source}")]
    Trial {
        seed: u64,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
