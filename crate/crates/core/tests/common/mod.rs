//! Independent oracles for cross-checking the library's algorithms.
//!
//! Everything here recomputes results from first principles using a
//! different method than the implementation under test: mutual reachability
//! by transitive closure (Warshall) instead of Kosaraju, coalition
//! minimality by full power-set domination scan instead of single-drop
//! checks.

use corelens::reachgraph::{NodeId, ReachGraph};
use corelens::simnet::rng::CounterRng;
use std::collections::BTreeSet;

/// Strongly connected components as mutual-reachability classes of the
/// transitive closure.
pub fn closure_components(n: usize, edges: &[(usize, usize)]) -> BTreeSet<BTreeSet<usize>> {
    let mut reach = vec![vec![false; n]; n];
    for v in 0..n {
        reach[v][v] = true;
    }
    for &(s, d) in edges {
        reach[s][d] = true;
    }
    for k in 0..n {
        for i in 0..n {
            if reach[i][k] {
                for j in 0..n {
                    if reach[k][j] {
                        reach[i][j] = true;
                    }
                }
            }
        }
    }
    let mut assigned = vec![false; n];
    let mut components = BTreeSet::new();
    for i in 0..n {
        if assigned[i] {
            continue;
        }
        let mut component = BTreeSet::new();
        for j in 0..n {
            if reach[i][j] && reach[j][i] {
                component.insert(j);
                assigned[j] = true;
            }
        }
        components.insert(component);
    }
    components
}

/// All minimal majority coalitions by exhaustive power-set scan: a subset is
/// kept iff it holds a strict weight majority and no other majority subset is
/// strictly contained in it.
pub fn powerset_minimal_coalitions(weights: &[u64]) -> BTreeSet<BTreeSet<usize>> {
    let n = weights.len();
    assert!(n <= 16, "power-set oracle blow-up");
    let total: u128 = weights.iter().map(|&w| w as u128).sum();
    let majority = |mask: u32| -> bool {
        let sum: u128 = (0..n)
            .filter(|&i| mask & (1 << i) != 0)
            .map(|i| weights[i] as u128)
            .sum();
        2 * sum > total
    };
    let winners: Vec<u32> = (1..(1u32 << n)).filter(|&m| majority(m)).collect();
    winners
        .iter()
        .filter(|&&m| !winners.iter().any(|&other| other != m && other & m == other))
        .map(|&m| (0..n).filter(|&i| m & (1 << i) != 0).collect())
        .collect()
}

/// Direct pair scan over declared core members: does `member` lack a mutual
/// direct edge with some other core member?
pub fn pair_scan_partial(graph: &ReachGraph, core: &BTreeSet<NodeId>, member: &NodeId) -> bool {
    core.iter()
        .filter(|m| *m != member)
        .any(|other| !graph.has_edge(member, other) || !graph.has_edge(other, member))
}

/// A reproducible random digraph: node names `n0..`, weights in `1..=100`,
/// roughly `edge_budget` edge draws with self-edges allowed. Returns the
/// graph plus the raw (weights, edges) view the oracles work from.
pub fn random_graph(
    rng: &CounterRng,
    max_nodes: usize,
    edge_budget: usize,
) -> (ReachGraph, Vec<u64>, Vec<(usize, usize)>) {
    let n = 1 + rng.stream_str("n").below(0, max_nodes as u64) as usize;
    let e = rng.stream_str("e").below(0, (edge_budget + 1) as u64) as usize;
    let weight_rng = rng.stream_str("w");
    let mut graph = ReachGraph::new();
    let mut weights = Vec::with_capacity(n);
    for i in 0..n {
        let w = 1 + weight_rng.below(i as u64, 100);
        graph.add_node(format!("n{i}"), w).unwrap();
        weights.push(w);
    }
    let edge_rng = rng.stream_str("edges");
    let mut edges = Vec::new();
    for k in 0..e {
        let s = edge_rng.below(2 * k as u64, n as u64) as usize;
        let d = edge_rng.below(2 * k as u64 + 1, n as u64) as usize;
        graph.add_edge(format!("n{s}"), format!("n{d}"));
        edges.push((s, d));
    }
    (graph, weights, edges)
}

/// Node name back to its index in the generated graph.
pub fn node_index(id: &NodeId) -> usize {
    id.as_str().strip_prefix('n').unwrap().parse().unwrap()
}

/// The library's component partition as index sets, comparable with
/// [`closure_components`].
pub fn partition_of(graph: &ReachGraph) -> BTreeSet<BTreeSet<usize>> {
    graph
        .components()
        .unwrap()
        .into_iter()
        .map(|c| c.members.iter().map(node_index).collect())
        .collect()
}
