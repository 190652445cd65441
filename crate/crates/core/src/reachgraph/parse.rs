//! Edge-list text format.
//!
//! One record per line; `#` starts a comment; blank lines are ignored.
//!
//! ```text
//! # optional weight declarations
//! node A 90
//! node B 2
//! # edges
//! A B
//! B A
//! D D
//! ```
//!
//! `node <id> <weight>` declares a node; a bare `<src> <dst>` pair declares a
//! directed edge. Nodes first seen in an edge get the default weight 1, and a
//! later `node` line may still set their weight; declaring the same node's
//! weight twice is an error.

use super::ReachGraph;
use crate::ParseError;
use std::collections::HashSet;

pub fn parse_edge_list(text: &str) -> Result<ReachGraph, ParseError> {
    let mut g = ReachGraph::new();
    let mut declared: HashSet<String> = HashSet::new();
    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        };
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens.as_slice() {
            [] => {}
            ["node", id, weight] => {
                let w: u64 = weight.parse().map_err(|_| {
                    ParseError::new(lineno, format!("invalid weight {weight:?} for node {id}"))
                })?;
                if !declared.insert((*id).to_string()) {
                    return Err(ParseError::new(lineno, format!("duplicate weight declaration for node {id}")));
                }
                if g.weight_of(&(*id).into()).is_some() {
                    g.set_weight(&(*id).into(), w).expect("node exists");
                } else {
                    g.add_node(*id, w).expect("checked for duplicates");
                }
            }
            [src, dst] => g.add_edge(*src, *dst),
            _ => {
                return Err(ParseError::new(
                    lineno,
                    format!("expected `node <id> <weight>` or `<src> <dst>`, got {:?}", line.trim()),
                ))
            }
        }
    }
    Ok(g)
}

/// Inverse of [`parse_edge_list`]: weight declarations first, then edges.
pub fn write_edge_list(g: &ReachGraph) -> String {
    let mut out = String::new();
    for id in g.node_ids() {
        let w = g.weight_of(id).expect("listed node has a weight");
        out.push_str(&format!("node {id} {w}\n"));
    }
    for (s, d) in g.edges() {
        out.push_str(&format!("{s} {d}\n"));
    }
    out
}
