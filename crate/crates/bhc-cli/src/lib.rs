//! Command-line front end for the clustering library: CSV ingestion,
//! pipeline orchestration, dendrogram serialization and plotting.

pub mod fixtures;
pub mod io;
pub mod pipeline;
pub mod serialize;
pub mod svg;
