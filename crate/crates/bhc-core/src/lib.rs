//! Hierarchical clustering of uncertain data in the belief-function
//! framework, next to a classical agglomerative baseline.
//!
//! The crate provides:
//!
//! * [`belief`]: basic belief assignments over a finite frame, conjunctive
//!   and Dempster combination, and the pignistic transform.
//! * [`distance`]: Euclidean distance matrices and single / complete /
//!   average / Ward linkage between clusters.
//! * [`hac`]: classical agglomerative clustering with a distance-indexed
//!   dendrogram, plus dendrogram cutting.
//! * [`bhc`]: belief hierarchical clustering: per-item mass functions built
//!   from decayed distances, merge selection by the maximal product of
//!   pignistic probabilities, and a dendrogram indexed by their sum.
//! * [`kmeans`]: seeded Lloyd pre-clustering to reduce the item count
//!   before the hierarchical stage.
//! * [`metrics`]: pairwise precision, recall and Rand index between
//!   partitions.
//! * [`oracle`]: slow, exhaustive reference implementations for the test
//!   suites.
//!
//! All values are immutable after construction and every operation is a pure
//! function, so everything here is safe to share across threads.

pub mod belief;
pub mod bhc;
pub mod dataset;
pub mod distance;
pub mod error;
pub mod hac;
pub mod kmeans;
pub mod metrics;
pub mod oracle;

pub use belief::{
    conjunctive_combine, dempster_combine, make_simple_mass, pignistic, Frame, MassFunction,
    PignisticDistribution, Subset,
};
pub use bhc::{
    bhc_cluster, cluster_mass_variant_a, cluster_mass_variant_b, object_mass, resolve_gamma,
    select_cluster_pair, select_object_pair, Gamma, MassParams, MergeTrace, MergeTraceRow,
    PairSelection, Variant,
};
pub use dataset::Dataset;
pub use distance::{euclidean_matrix, linkage_distance, ClusterSummary, DistanceMatrix, Linkage};
pub use error::{Error, Result};
pub use hac::{cut, hac_cluster, hac_cluster_from, Dendrogram, IndexKind, Merge, Partition};
pub use kmeans::{kmeans, kmeans_with_history, KMeansConfig};
pub use metrics::{evaluate, metrics, pair_counts, Metrics, PairCounts};
