//! Weighted directed reachability graphs and the majority-core verdict.
//!
//! Nodes carry non-negative integer weights (typically active-address counts).
//! The core, if it exists, is the strongly connected component holding a
//! strict majority (> 0.5) of total weight. Strictness makes the core unique:
//! two disjoint components cannot both exceed half of the same total.
//!
//! Classification within a core verdict:
//! - `CoreFull`: core member with a direct mutual edge to every other core
//!   member (reachability may still transit; the direct test is deliberate —
//!   a missing direct link is the first symptom of a forming peninsula).
//! - `Peninsula`: core member missing at least one direct mutual link.
//! - `Island`: node in a non-core component of size ≥ 2.
//! - `AddressIsland`: singleton non-core component that can still reach
//!   itself (self-edge) — alive but alone.
//! - `Down`: singleton component with no self-edge — not even self-reachable,
//!   i.e. externally down / in outage.

mod alloc;
mod parse;

pub use alloc::{
    minimal_coalitions, parse_allocations_csv, secede, ActorAllocation, AllocError, Coalition,
    SecessionVerdict, WeightField, MAX_COALITION_ACTORS,
};
pub use parse::{parse_edge_list, write_edge_list};

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Opaque node identifier.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(String);

impl NodeId {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for NodeId {
    fn from(s: &str) -> Self {
        NodeId(s.to_string())
    }
}

impl From<String> for NodeId {
    fn from(s: String) -> Self {
        NodeId(s)
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GraphError {
    #[error("graph has no nodes")]
    EmptyGraph,
    #[error("total node weight is zero; core fractions are undefined")]
    ZeroTotalWeight,
    #[error("duplicate node {0}")]
    DuplicateNode(NodeId),
    #[error("node {0} not in graph")]
    NodeNotFound(NodeId),
    #[error("verdict does not describe this graph: {0}")]
    InconsistentInput(String),
    #[error("fraction {0} outside [0, 1]")]
    InvalidFraction(f64),
}

/// A strongly connected component: its members and its share of total weight.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Component {
    pub members: BTreeSet<NodeId>,
    pub weight_fraction: f64,
}

/// Outcome of the majority test over a component partition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict")]
pub enum CoreVerdict {
    /// Exactly one component holds a strict majority of weight.
    Core(Component),
    /// No component exceeds half of total weight.
    NoCore,
}

/// Node classification relative to a core verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NodeClass {
    CoreFull,
    Peninsula,
    Island,
    AddressIsland,
    Down,
}

impl fmt::Display for NodeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// Membership proof for one node: its mutually-reachable weight share and
/// whether that share is a strict majority.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Membership {
    pub fraction: f64,
    pub in_core: bool,
}

/// Directed graph with weighted nodes.
///
/// Edges referencing unknown endpoints create them with the default weight 1.
/// Duplicate edges collapse; self-edges are meaningful (self-reachability).
#[derive(Debug, Clone, Default)]
pub struct ReachGraph {
    ids: Vec<NodeId>,
    weights: Vec<u64>,
    index: HashMap<NodeId, usize>,
    out: Vec<Vec<usize>>,
    edge_set: HashSet<(usize, usize)>,
}

impl ReachGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Declare a node with an explicit weight.
    pub fn add_node(&mut self, id: impl Into<NodeId>, weight: u64) -> Result<(), GraphError> {
        let id = id.into();
        if self.index.contains_key(&id) {
            return Err(GraphError::DuplicateNode(id));
        }
        self.push_node(id, weight);
        Ok(())
    }

    fn push_node(&mut self, id: NodeId, weight: u64) -> usize {
        let i = self.ids.len();
        self.index.insert(id.clone(), i);
        self.ids.push(id);
        self.weights.push(weight);
        self.out.push(Vec::new());
        i
    }

    fn ensure_node(&mut self, id: impl Into<NodeId>) -> usize {
        let id = id.into();
        match self.index.get(&id) {
            Some(&i) => i,
            None => self.push_node(id, 1),
        }
    }

    /// Add a directed edge, creating unknown endpoints at weight 1.
    pub fn add_edge(&mut self, src: impl Into<NodeId>, dst: impl Into<NodeId>) {
        let s = self.ensure_node(src);
        let d = self.ensure_node(dst);
        if self.edge_set.insert((s, d)) {
            self.out[s].push(d);
        }
    }

    /// Overwrite the weight of an existing node.
    pub fn set_weight(&mut self, id: &NodeId, weight: u64) -> Result<(), GraphError> {
        let i = *self.index.get(id).ok_or_else(|| GraphError::NodeNotFound(id.clone()))?;
        self.weights[i] = weight;
        Ok(())
    }

    pub fn node_count(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_set.len()
    }

    pub fn node_ids(&self) -> impl Iterator<Item = &NodeId> {
        self.ids.iter()
    }

    pub fn weight_of(&self, id: &NodeId) -> Option<u64> {
        self.index.get(id).map(|&i| self.weights[i])
    }

    pub fn has_edge(&self, src: &NodeId, dst: &NodeId) -> bool {
        match (self.index.get(src), self.index.get(dst)) {
            (Some(&s), Some(&d)) => self.edge_set.contains(&(s, d)),
            _ => false,
        }
    }

    /// Edges as (src, dst) id pairs, in insertion order per source.
    pub fn edges(&self) -> impl Iterator<Item = (&NodeId, &NodeId)> {
        self.out
            .iter()
            .enumerate()
            .flat_map(move |(s, ds)| ds.iter().map(move |&d| (&self.ids[s], &self.ids[d])))
    }

    pub fn total_weight(&self) -> u128 {
        self.weights.iter().map(|&w| w as u128).sum()
    }

    /// Strongly connected components with weight fractions.
    ///
    /// Components are sorted by descending weight fraction, ties broken by the
    /// smallest member id, so output order is deterministic.
    pub fn components(&self) -> Result<Vec<Component>, GraphError> {
        if self.is_empty() {
            return Err(GraphError::EmptyGraph);
        }
        let total = self.total_weight();
        if total == 0 {
            return Err(GraphError::ZeroTotalWeight);
        }
        let comps = self.kosaraju();
        let mut out: Vec<Component> = comps
            .into_iter()
            .map(|members| {
                let weight: u128 = members.iter().map(|&i| self.weights[i] as u128).sum();
                Component {
                    members: members.iter().map(|&i| self.ids[i].clone()).collect(),
                    weight_fraction: weight as f64 / total as f64,
                }
            })
            .collect();
        out.sort_by(|a, b| {
            b.weight_fraction
                .total_cmp(&a.weight_fraction)
                .then_with(|| a.members.iter().next().cmp(&b.members.iter().next()))
        });
        Ok(out)
    }

    /// Kosaraju's algorithm, iterative in both passes. Returns components as
    /// index lists; singletons without self-edges are ordinary components.
    fn kosaraju(&self) -> Vec<Vec<usize>> {
        let n = self.ids.len();
        // Pass 1: finish order via explicit DFS stack.
        let mut seen = vec![false; n];
        let mut order = Vec::with_capacity(n);
        let mut stack: Vec<(usize, usize)> = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            stack.push((start, 0));
            while let Some(&mut (v, ref mut next)) = stack.last_mut() {
                if *next < self.out[v].len() {
                    let w = self.out[v][*next];
                    *next += 1;
                    if !seen[w] {
                        seen[w] = true;
                        stack.push((w, 0));
                    }
                } else {
                    order.push(v);
                    stack.pop();
                }
            }
        }
        // Pass 2: reverse graph, sweep in reverse finish order.
        let mut rev: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &(s, d) in &self.edge_set {
            rev[d].push(s);
        }
        let mut comp_of = vec![usize::MAX; n];
        let mut comps: Vec<Vec<usize>> = Vec::new();
        let mut dfs = Vec::new();
        for &start in order.iter().rev() {
            if comp_of[start] != usize::MAX {
                continue;
            }
            let c = comps.len();
            comps.push(Vec::new());
            comp_of[start] = c;
            dfs.push(start);
            while let Some(v) = dfs.pop() {
                comps[c].push(v);
                for &w in &rev[v] {
                    if comp_of[w] == usize::MAX {
                        comp_of[w] = c;
                        dfs.push(w);
                    }
                }
            }
        }
        comps
    }

    /// Weight share mutually reachable with `node` (its component, including
    /// the node itself) and whether that share is a strict majority.
    pub fn membership(&self, node: &NodeId) -> Result<Membership, GraphError> {
        let &start = self.index.get(node).ok_or_else(|| GraphError::NodeNotFound(node.clone()))?;
        let total = self.total_weight();
        if total == 0 {
            return Err(GraphError::ZeroTotalWeight);
        }
        let fwd = self.reach_from(start, false);
        let bwd = self.reach_from(start, true);
        let weight: u128 = (0..self.ids.len())
            .filter(|&i| fwd[i] && bwd[i])
            .map(|i| self.weights[i] as u128)
            .sum();
        let fraction = weight as f64 / total as f64;
        Ok(Membership { fraction, in_core: fraction > 0.5 })
    }

    fn reach_from(&self, start: usize, reversed: bool) -> Vec<bool> {
        let mut seen = vec![false; self.ids.len()];
        seen[start] = true;
        let mut queue = vec![start];
        while let Some(v) = queue.pop() {
            if reversed {
                for &(s, d) in &self.edge_set {
                    if d == v && !seen[s] {
                        seen[s] = true;
                        queue.push(s);
                    }
                }
            } else {
                for &w in &self.out[v] {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push(w);
                    }
                }
            }
        }
        seen
    }

    /// Classify every node relative to a core verdict.
    ///
    /// The verdict must describe this graph (its component must match one of
    /// the graph's components; a `NoCore` verdict must not contradict an
    /// actual majority component) — otherwise `InconsistentInput`.
    pub fn classify(&self, verdict: &CoreVerdict) -> Result<BTreeMap<NodeId, NodeClass>, GraphError> {
        let comps = self.components()?;
        let core_members: Option<&BTreeSet<NodeId>> = match verdict {
            CoreVerdict::Core(c) => {
                if c.weight_fraction <= 0.5 {
                    return Err(GraphError::InconsistentInput(format!(
                        "core fraction {} is not a strict majority",
                        c.weight_fraction
                    )));
                }
                let matched = comps.iter().find(|k| k.members == c.members);
                match matched {
                    Some(_) => Some(&c.members),
                    None => {
                        return Err(GraphError::InconsistentInput(
                            "core members are not a component of this graph".into(),
                        ))
                    }
                }
            }
            CoreVerdict::NoCore => {
                if comps.first().is_some_and(|k| k.weight_fraction > 0.5) {
                    return Err(GraphError::InconsistentInput(
                        "graph has a majority component but verdict says NoCore".into(),
                    ));
                }
                None
            }
        };

        let mut classes = BTreeMap::new();
        for comp in &comps {
            if Some(&comp.members) == core_members {
                let idx: Vec<usize> = comp.members.iter().map(|m| self.index[m]).collect();
                for (&i, id) in idx.iter().zip(comp.members.iter()) {
                    let full = idx
                        .iter()
                        .filter(|&&j| j != i)
                        .all(|&j| self.edge_set.contains(&(i, j)) && self.edge_set.contains(&(j, i)));
                    classes.insert(id.clone(), if full { NodeClass::CoreFull } else { NodeClass::Peninsula });
                }
            } else if comp.members.len() >= 2 {
                for id in &comp.members {
                    classes.insert(id.clone(), NodeClass::Island);
                }
            } else {
                let id = comp.members.iter().next().expect("component is non-empty");
                let i = self.index[id];
                let class = if self.edge_set.contains(&(i, i)) {
                    NodeClass::AddressIsland
                } else {
                    NodeClass::Down
                };
                classes.insert(id.clone(), class);
            }
        }
        Ok(classes)
    }

    /// For each core member, how many other core members it lacks a direct
    /// mutual edge with. CoreFull nodes map to 0; the Peninsula class is this
    /// count being non-zero. Exposed separately because the degree of
    /// peninsula-ness is often more useful than the binary class.
    pub fn missing_core_links(&self, verdict: &CoreVerdict) -> Result<BTreeMap<NodeId, usize>, GraphError> {
        let classes = self.classify(verdict)?; // reuse the consistency checks
        let CoreVerdict::Core(core) = verdict else {
            return Ok(BTreeMap::new());
        };
        let idx: Vec<usize> = core.members.iter().map(|m| self.index[m]).collect();
        let mut out = BTreeMap::new();
        for (&i, id) in idx.iter().zip(core.members.iter()) {
            debug_assert!(classes.contains_key(id));
            let missing = idx
                .iter()
                .filter(|&&j| j != i)
                .filter(|&&j| !(self.edge_set.contains(&(i, j)) && self.edge_set.contains(&(j, i))))
                .count();
            out.insert(id.clone(), missing);
        }
        Ok(out)
    }
}

/// Pick the majority component, if any. Strictness (> 0.5) guarantees at most
/// one component can qualify over any partition whose fractions sum to 1.
pub fn find_core(components: &[Component]) -> CoreVerdict {
    let best = components
        .iter()
        .max_by(|a, b| a.weight_fraction.total_cmp(&b.weight_fraction));
    match best {
        Some(c) if c.weight_fraction > 0.5 => CoreVerdict::Core(c.clone()),
        _ => CoreVerdict::NoCore,
    }
}

/// Address-family transition stage, judged from two observable fractions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TransitionStage {
    /// The legacy family still carries the majority on its own.
    V4Dominant,
    /// A majority of hosts are dual-homed: both families interoperate.
    OnPar,
    /// Dual-homing majority and a majority of new-family hosts no longer
    /// reachable over the legacy family.
    V6Superseded,
}

impl fmt::Display for TransitionStage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// Stage rule: OnPar once dual-homed hosts exceed half; V6Superseded once,
/// additionally, more than half of v6 hosts are unreachable over v4.
pub fn transition_stage(
    dual_homed_fraction: f64,
    v6_hosts_unreachable_v4_fraction: f64,
) -> Result<TransitionStage, GraphError> {
    for f in [dual_homed_fraction, v6_hosts_unreachable_v4_fraction] {
        if !(0.0..=1.0).contains(&f) || f.is_nan() {
            return Err(GraphError::InvalidFraction(f));
        }
    }
    Ok(if dual_homed_fraction > 0.5 {
        if v6_hosts_unreachable_v4_fraction > 0.5 {
            TransitionStage::V6Superseded
        } else {
            TransitionStage::OnPar
        }
    } else {
        TransitionStage::V4Dominant
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The six-node toy world: hub A mutually linked to B and C, D and E
    /// alone with self-edges, X alone with no edges at all.
    fn toy_world(weights: [u64; 6]) -> ReachGraph {
        let mut g = ReachGraph::new();
        for (id, w) in ["A", "B", "C", "D", "E", "X"].iter().zip(weights) {
            g.add_node(*id, w).unwrap();
        }
        g.add_edge("A", "B");
        g.add_edge("B", "A");
        g.add_edge("A", "C");
        g.add_edge("C", "A");
        g.add_edge("D", "D");
        g.add_edge("E", "E");
        g
    }

    fn members(c: &Component) -> Vec<&str> {
        c.members.iter().map(|m| m.as_str()).collect()
    }

    #[test]
    fn toy_world_components() {
        let g = toy_world([1, 1, 1, 1, 1, 1]);
        let comps = g.components().unwrap();
        let sets: Vec<Vec<&str>> = comps.iter().map(members).collect();
        assert!(sets.contains(&vec!["A", "B", "C"]));
        assert!(sets.contains(&vec!["D"]));
        assert!(sets.contains(&vec!["E"]));
        assert!(sets.contains(&vec!["X"]));
        assert_eq!(comps.len(), 4);
        let total: f64 = comps.iter().map(|c| c.weight_fraction).sum();
        assert!((total - 1.0).abs() < 1e-9, "fractions must partition unity, got {total}");
    }

    #[test]
    fn equal_weights_leave_no_majority() {
        // With six equal nodes the {A,B,C} component holds exactly half,
        // which the strict rule refuses.
        let g = toy_world([1, 1, 1, 1, 1, 1]);
        let comps = g.components().unwrap();
        assert_eq!(find_core(&comps), CoreVerdict::NoCore);
        let m = g.membership(&"B".into()).unwrap();
        assert!((m.fraction - 0.5).abs() < 1e-12);
        assert!(!m.in_core);
    }

    #[test]
    fn weighted_toy_world_has_core_and_expected_classes() {
        let g = toy_world([90, 2, 2, 2, 2, 2]);
        let comps = g.components().unwrap();
        let verdict = find_core(&comps);
        let CoreVerdict::Core(core) = &verdict else {
            panic!("expected a core, got {verdict:?}");
        };
        assert_eq!(members(core), vec!["A", "B", "C"]);
        assert!((core.weight_fraction - 0.94).abs() < 1e-9);

        let classes = g.classify(&verdict).unwrap();
        assert_eq!(classes[&"A".into()], NodeClass::CoreFull);
        assert_eq!(classes[&"B".into()], NodeClass::Peninsula, "B lacks a direct link to C");
        assert_eq!(classes[&"C".into()], NodeClass::Peninsula);
        assert_eq!(classes[&"D".into()], NodeClass::AddressIsland);
        assert_eq!(classes[&"E".into()], NodeClass::AddressIsland);
        assert_eq!(classes[&"X".into()], NodeClass::Down, "no self-edge means externally down");

        let missing = g.missing_core_links(&verdict).unwrap();
        assert_eq!(missing[&"A".into()], 0);
        assert_eq!(missing[&"B".into()], 1);
        assert_eq!(missing[&"C".into()], 1);
    }

    #[test]
    fn asymmetric_majority_union_is_core() {
        // One component carrying 0.49 + 0.02 + 0.02 of the weight qualifies.
        let mut g = ReachGraph::new();
        g.add_node("A", 49).unwrap();
        g.add_node("B", 2).unwrap();
        g.add_node("C", 2).unwrap();
        g.add_node("rest", 47).unwrap();
        for (s, d) in [("A", "B"), ("B", "C"), ("C", "A")] {
            g.add_edge(s, d);
            g.add_edge(d, s);
        }
        let comps = g.components().unwrap();
        let verdict = find_core(&comps);
        let CoreVerdict::Core(core) = verdict else { panic!("expected core") };
        assert_eq!(members(&core), vec!["A", "B", "C"]);
        assert!((core.weight_fraction - 0.53).abs() < 1e-9);
    }

    #[test]
    fn find_core_picks_the_single_majority_fraction() {
        let mk = |names: &[&str], f: f64| Component {
            members: names.iter().map(|n| NodeId::from(*n)).collect(),
            weight_fraction: f,
        };
        let comps = vec![mk(&["a"], 0.98), mk(&["b"], 0.01), mk(&["c"], 0.01)];
        assert!(matches!(find_core(&comps), CoreVerdict::Core(c) if c.weight_fraction == 0.98));
        let tied = vec![mk(&["a"], 0.5), mk(&["b"], 0.5)];
        assert_eq!(find_core(&tied), CoreVerdict::NoCore);
        assert_eq!(find_core(&[]), CoreVerdict::NoCore);
    }

    #[test]
    fn membership_of_high_weight_component() {
        let mut g = ReachGraph::new();
        g.add_node("a", 98).unwrap();
        g.add_node("b", 1).unwrap();
        g.add_node("c", 1).unwrap();
        g.add_edge("a", "b");
        g.add_edge("b", "a");
        let m = g.membership(&"a".into()).unwrap();
        assert!((m.fraction - 0.99).abs() < 1e-9);
        assert!(m.in_core);

        // Isolated self-only node: fraction is its own weight share.
        let m = g.membership(&"c".into()).unwrap();
        assert!((m.fraction - 0.01).abs() < 1e-9);
        assert!(!m.in_core);
    }

    #[test]
    fn membership_unknown_node_errors() {
        let g = toy_world([1; 6]);
        assert_eq!(
            g.membership(&"Q".into()).unwrap_err(),
            GraphError::NodeNotFound("Q".into())
        );
    }

    #[test]
    fn empty_graph_errors() {
        let g = ReachGraph::new();
        assert_eq!(g.components().unwrap_err(), GraphError::EmptyGraph);
    }

    #[test]
    fn zero_total_weight_errors() {
        let mut g = ReachGraph::new();
        g.add_node("a", 0).unwrap();
        g.add_node("b", 0).unwrap();
        assert_eq!(g.components().unwrap_err(), GraphError::ZeroTotalWeight);
    }

    #[test]
    fn duplicate_node_errors() {
        let mut g = ReachGraph::new();
        g.add_node("a", 1).unwrap();
        assert_eq!(g.add_node("a", 2).unwrap_err(), GraphError::DuplicateNode("a".into()));
    }

    #[test]
    fn classify_rejects_foreign_verdict() {
        let g = toy_world([90, 2, 2, 2, 2, 2]);
        let fake = CoreVerdict::Core(Component {
            members: ["A", "B"].iter().map(|s| NodeId::from(*s)).collect(),
            weight_fraction: 0.9,
        });
        assert!(matches!(g.classify(&fake), Err(GraphError::InconsistentInput(_))));

        // NoCore contradicting an actual majority is also inconsistent.
        assert!(matches!(
            g.classify(&CoreVerdict::NoCore),
            Err(GraphError::InconsistentInput(_))
        ));
    }

    #[test]
    fn classify_under_no_core_maps_by_component_shape() {
        let g = toy_world([1, 1, 1, 1, 1, 1]);
        let classes = g.classify(&CoreVerdict::NoCore).unwrap();
        for n in ["A", "B", "C"] {
            assert_eq!(classes[&NodeId::from(n)], NodeClass::Island, "{n} sits in a size-3 component");
        }
        assert_eq!(classes[&"D".into()], NodeClass::AddressIsland);
        assert_eq!(classes[&"E".into()], NodeClass::AddressIsland);
        assert_eq!(classes[&"X".into()], NodeClass::Down);
    }

    #[test]
    fn single_self_reaching_majority_node_is_core_full() {
        let mut g = ReachGraph::new();
        g.add_node("hub", 99).unwrap();
        g.add_node("leaf", 1).unwrap();
        g.add_edge("hub", "hub");
        let verdict = find_core(&g.components().unwrap());
        let classes = g.classify(&verdict).unwrap();
        assert_eq!(classes[&"hub".into()], NodeClass::CoreFull);
        assert_eq!(classes[&"leaf".into()], NodeClass::Down);
    }

    #[test]
    fn planted_missing_mutual_edge_marks_exactly_that_pair() {
        // Complete mutual mesh on 10 nodes, then delete the u<->v pair.
        let n = 10;
        let names: Vec<String> = (0..n).map(|i| format!("n{i}")).collect();
        let mut g = ReachGraph::new();
        for name in &names {
            g.add_node(name.clone(), 1).unwrap();
        }
        for i in 0..n {
            for j in 0..n {
                if i == j || (i, j) == (2, 7) || (i, j) == (7, 2) {
                    continue;
                }
                g.add_edge(names[i].clone(), names[j].clone());
            }
        }
        let verdict = find_core(&g.components().unwrap());
        let classes = g.classify(&verdict).unwrap();
        for (i, name) in names.iter().enumerate() {
            let expected = if i == 2 || i == 7 { NodeClass::Peninsula } else { NodeClass::CoreFull };
            assert_eq!(classes[&NodeId::from(name.clone())], expected, "node {name}");
        }
    }

    #[test]
    fn transition_stages() {
        assert_eq!(transition_stage(0.3, 0.0).unwrap(), TransitionStage::V4Dominant);
        assert_eq!(transition_stage(0.6, 0.2).unwrap(), TransitionStage::OnPar);
        assert_eq!(transition_stage(0.6, 0.6).unwrap(), TransitionStage::V6Superseded);
        // Boundary: exactly half is not a majority.
        assert_eq!(transition_stage(0.5, 0.9).unwrap(), TransitionStage::V4Dominant);
        assert_eq!(transition_stage(0.51, 0.5).unwrap(), TransitionStage::OnPar);
        assert!(matches!(transition_stage(1.2, 0.0), Err(GraphError::InvalidFraction(_))));
        assert!(matches!(transition_stage(0.5, -0.1), Err(GraphError::InvalidFraction(_))));
    }
}
