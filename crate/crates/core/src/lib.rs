//! Controlling centrality of temporal networks.
//!
//! A temporal network is a sequence of undirected contact snapshots
//! `G^1..G^T`. Placing a single controller on node `o` yields a linear
//! time-varying system whose controllability matrix `W_c` has one column per
//! time step; the *controlling centrality* `S_M(o)` is the generic rank of
//! `W_c`, computed here by random evaluation over a large prime field.
//!
//! The crate also builds the layered time-ordered graph of the network,
//! extracts the BFS temporal tree behind every column, classifies the trees
//! (heterogeneous/homogeneous, independent/interdependent), and turns the
//! per-group closed-form ranks into analytic lower/upper bounds that sandwich
//! `S_M(o)` without any rank computation.
//!
//! Modules, roughly bottom-up:
//!
//! * [`temporal_graph`]: contact events, snapshots, parsing
//! * [`tog`]: the layered time-ordered graph and its BFS spanning trees
//! * [`field`]: prime-field arithmetic and exact rank
//! * [`reachability`]: communicability rows, the `W*` matrix, reachable sets
//! * [`controllability`]: `W_c`, generic rank, `S_M(o)`
//! * [`trees`]: tree taxonomy, group rank formulas, bounds
//! * [`synth`]: seeded random network generator
//! * [`oracle`]: brute-force reference implementations for tests

pub mod controllability;
pub mod field;
#[cfg(test)]
pub(crate) mod fixtures;
pub mod oracle;
pub mod reachability;
pub mod seeding;
pub mod synth;
pub mod temporal_graph;
pub mod tog;
pub mod trees;

pub use controllability::{CentralityConfig, CentralityReport, FieldAssignment};
pub use temporal_graph::{ContactEvent, NodeId, ParamId, TemporalNetwork, TimeStep};
pub use trees::{BoundsReport, TemporalTree, TreeTaxonomy};

/// everything that can go wrong in this crate
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("empty contact list")]
    EmptyInput,
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("node id {0} out of range")]
    NodeOutOfRange(u32),
    #[error("time point {t} outside 1..={horizon}")]
    TimeOutOfRange { t: usize, horizon: usize },
    #[error("start time {t0} outside 0..={horizon}")]
    StartTimeOutOfRange { t0: usize, horizon: usize },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prime modulus {0} too small, need > 10^6")]
    PrimeTooSmall(u64),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("instance too large for the oracle: N = {n} (cap {max_n}), T = {t} (cap {max_t})")]
    InstanceTooLarge {
        n: usize,
        max_n: usize,
        t: usize,
        max_t: usize,
    },
    #[error("classification contract violated: {0}")]
    ContractViolation(String),
    #[error("empty group")]
    EmptyGroup,
}

pub type Result<T> = std::result::Result<T, Error>;
