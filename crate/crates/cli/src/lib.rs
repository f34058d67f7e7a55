//! Pair-file ingestion, bundled example pairs and report assembly for the
//! `logpair` binary.

pub mod bundled;
pub mod pairfile;
pub mod report;
