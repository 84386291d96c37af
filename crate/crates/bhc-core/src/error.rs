use thiserror::Error;

/// A type alias for `Result<T, Error>`.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors produced by clustering and belief-function operations.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// Singleton masses of a simple bba sum to more than one.
    #[error("singleton masses sum to {sum}, which exceeds 1")]
    SumExceedsOne { sum: f64 },

    /// Two mass functions defined over different frames were combined.
    #[error("mass functions are defined over different frames")]
    FrameMismatch,

    /// All combined mass fell on the empty set; normalization is undefined.
    #[error("total conflict: all mass is assigned to the empty set")]
    TotalConflict,

    /// A focal set references elements outside the frame.
    #[error("focal set is not a subset of the frame")]
    NotASubset,

    /// A mass value lies outside [0, 1] or the masses do not sum to one.
    #[error("invalid mass assignment: {0}")]
    InvalidMass(String),

    /// Feature rows of differing widths.
    #[error("dimension mismatch: expected {expected} features, row {row} has {got}")]
    DimensionMismatch {
        row: usize,
        expected: usize,
        got: usize,
    },

    /// Ward linkage requested without cluster centers and sizes.
    #[error("ward linkage requires cluster centers and sizes")]
    MissingSummaries,

    /// Fewer objects than the operation can work with.
    #[error("need at least {needed} objects, got {got}")]
    TooFewObjects { needed: usize, got: usize },

    /// Dendrogram cut target outside 1..=n_leaves.
    #[error("invalid cluster count {k} for a dendrogram with {n_leaves} leaves")]
    InvalidK { k: usize, n_leaves: usize },

    /// Cluster-level operation invoked on a single cluster.
    #[error("operation requires at least two clusters")]
    SingleCluster,

    /// Two partitions over different object counts were compared.
    #[error("partition size mismatch: {left} vs {right} objects")]
    SizeMismatch { left: usize, right: usize },
}
