//! Narrator-network analysis for chain-of-narration corpora.
//!
//! The pipeline: parse a narrator table and a hadith chain file
//! ([`ingest`]), fold the validated records into an edge-weighted directed
//! "narrated to" graph ([`graph`]), then analyze it — centrality suites
//! ([`centrality`]), Louvain communities ([`community`]), degree-distribution
//! and small-world diagnostics ([`topology`]), era-by-city shift tables
//! ([`era`]) — and export the annotated graph for visualization tools
//! ([`layout`], [`export`]). A text snapshot ([`snapshot`]) lets expensive
//! analyses compose without re-parsing the corpus.
//!
//! Everything is deterministic: node ordering fixes summation order, random
//! elements (community detection, layout) are seeded, and all writers emit
//! byte-stable output.

pub mod centrality;
pub mod community;
pub mod era;
pub mod error;
pub mod export;
pub mod graph;
pub mod ingest;
pub mod layout;
pub mod model;
pub mod snapshot;
pub mod topology;

pub use error::{Error, Result};
