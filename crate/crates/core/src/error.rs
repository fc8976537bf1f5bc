use thiserror::Error;

use crate::matroid::BasisViolation;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ground set size {n} not supported (expected 1..={max})")]
    GroundSetSize { n: usize, max: usize },

    #[error("rank {r} not valid for ground set size {n}")]
    RankOutOfRange { r: usize, n: usize },

    #[error("operation needs 0 < r < n (got n={n}, r={r})")]
    DegenerateRank { r: usize, n: usize },

    #[error("subset has {got} elements, expected {want}")]
    SubsetSize { got: usize, want: usize },

    #[error("element {element} outside ground set of size {n}")]
    ElementOutOfRange { element: usize, n: usize },

    #[error("subset index {index} out of range: only {count} subsets exist")]
    IndexOutOfRange { index: usize, count: usize },

    #[error("requires r <= n/2 (got n={n}, r={r}); apply the operation to the dual")]
    DualizeFirst { n: usize, r: usize },

    #[error("{what} {value} exceeds the configured limit {limit}")]
    BudgetExceeded {
        what: &'static str,
        value: u64,
        limit: u64,
    },

    #[error("subsets {first:?} and {second:?} are adjacent; the set is not stable in J({n},{r})")]
    NotStable {
        n: usize,
        r: usize,
        first: Vec<usize>,
        second: Vec<usize>,
    },

    #[error("not a matroid: {0}")]
    NotAMatroid(BasisViolation),

    #[error("matroid has loops {loops:?} / coloops {coloops:?}; strip them before encoding")]
    LoopsOrColoops {
        loops: Vec<usize>,
        coloops: Vec<usize>,
    },

    #[error("rank precondition failed: {detail}")]
    RankPrecondition { detail: String },

    #[error("vertex set is empty")]
    EmptyVertexSet,

    #[error("invalid encoding: {reason}")]
    InvalidEncoding { reason: String },

    #[error("invalid {what}: {detail}")]
    InvalidFormat { what: &'static str, detail: String },

    #[error("expected a bound rounded {expected}")]
    RoundingMismatch { expected: &'static str },

    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
}

impl Error {
    /// Stable machine-readable tag for each error kind.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::GroundSetSize { .. } => "ground_set_size",
            Error::RankOutOfRange { .. } => "rank_out_of_range",
            Error::DegenerateRank { .. } => "degenerate_rank",
            Error::SubsetSize { .. } => "subset_size",
            Error::ElementOutOfRange { .. } => "element_out_of_range",
            Error::IndexOutOfRange { .. } => "index_out_of_range",
            Error::DualizeFirst { .. } => "dualize_first",
            Error::BudgetExceeded { .. } => "budget_exceeded",
            Error::NotStable { .. } => "not_stable",
            Error::NotAMatroid(_) => "not_a_matroid",
            Error::LoopsOrColoops { .. } => "loops_or_coloops",
            Error::RankPrecondition { .. } => "rank_precondition",
            Error::EmptyVertexSet => "empty_vertex_set",
            Error::InvalidEncoding { .. } => "invalid_encoding",
            Error::InvalidFormat { .. } => "invalid_format",
            Error::RoundingMismatch { .. } => "rounding_mismatch",
            Error::Inconsistent(_) => "inconsistent",
        }
    }
}
