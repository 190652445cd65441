//! Connectivity analysis around the majority core of a reachability graph.
//!
//! The toolkit answers one family of questions: when parts of a network can
//! reach each other but not everyone, who is still "the Internet"? The core is
//! defined as the strongly connected component holding a strict majority of
//! active-address weight; everything else is an island (alive but cut off), a
//! peninsula (partially reachable), or an outage (down entirely).
//!
//! Modules:
//! - [`reachgraph`]: weighted directed graphs, component analysis, the core
//!   verdict, node classification, secession/coalition arithmetic over
//!   allocation tables, and the v4/v6 transition staging rule.
//! - [`taxonomy`]: per-round and timeline classification of observation
//!   matrices collected from multiple vantage points.
//! - [`estimator`]: incremental tracking of a block's responsive addresses
//!   under a fixed probe budget, including post-event recovery dynamics.
//! - [`dnsmon`]: island/peninsula tagging of DNS vantage points and loss
//!   decomposition across nested VP populations.
//! - [`simnet`]: deterministic scenario generation with planted events and
//!   ground-truth scoring of recovered classifications.

#![forbid(unsafe_code)]

use thiserror::Error;

pub mod dnsmon;
pub mod estimator;
pub mod reachgraph;
pub mod simnet;
pub mod taxonomy;

/// Error for any line-oriented input format (edge lists, matrices, CSV, JSONL).
///
/// `line` is 1-based; callers that know the file name prepend it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, message: impl Into<String>) -> Self {
        ParseError { line, message: message.into() }
    }
}
