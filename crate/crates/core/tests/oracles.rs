//! Cross-checks against independent brute-force oracles (see `common/`).

mod common;

use common::*;
use corelens::dnsmon::{
    loss_report, tag_vps, DnsMeasurement, Family, Population, Tag, TagParams, Window,
    POPULATIONS, TARGET_COUNT,
};
use corelens::reachgraph::{
    find_core, minimal_coalitions, secede, ActorAllocation, CoreVerdict, NodeClass, NodeId,
    SecessionVerdict, WeightField,
};
use corelens::simnet::rng::CounterRng;
use corelens::taxonomy::{ObservationMatrix, ProbeOutcome};
use std::collections::{BTreeMap, BTreeSet};

#[test]
fn components_match_transitive_closure() {
    let root = CounterRng::new(0x5cc0);
    for case in 0..250u64 {
        let rng = root.stream(case);
        let (max_nodes, budget) = if case % 5 == 0 { (50, 200) } else { (12, 30) };
        let (graph, weights, edges) = random_graph(&rng, max_nodes, budget);
        let expected = closure_components(weights.len(), &edges);
        assert_eq!(partition_of(&graph), expected, "case {case}");
    }
}

#[test]
fn core_verdict_matches_weight_census() {
    let root = CounterRng::new(0xc03e);
    for case in 0..600u64 {
        let rng = root.stream(case);
        let (graph, weights, edges) = random_graph(&rng, 14, 40);
        let components = graph.components().unwrap();
        let verdict = find_core(&components);

        let total: u128 = weights.iter().map(|&w| w as u128).sum();
        let best: (u128, BTreeSet<usize>) = closure_components(weights.len(), &edges)
            .into_iter()
            .map(|c| (c.iter().map(|&i| weights[i] as u128).sum::<u128>(), c))
            .max()
            .unwrap();
        match verdict {
            CoreVerdict::Core(core) => {
                assert!(2 * best.0 > total, "case {case}: declared core without majority");
                let members: BTreeSet<usize> = core.members.iter().map(node_index).collect();
                assert_eq!(members, best.1, "case {case}: wrong members");
                assert!(
                    (core.weight_fraction - best.0 as f64 / total as f64).abs() < 1e-12,
                    "case {case}: wrong fraction"
                );
            }
            CoreVerdict::NoCore => {
                assert!(2 * best.0 <= total, "case {case}: missed a majority component");
            }
        }
    }
}

#[test]
fn node_classes_match_first_principles() {
    let root = CounterRng::new(0xc1a5);
    for case in 0..300u64 {
        let rng = root.stream(case);
        let (graph, weights, edges) = random_graph(&rng, 12, 30);
        let verdict = find_core(&graph.components().unwrap());
        let classes = graph.classify(&verdict).unwrap();
        assert_eq!(classes.len(), weights.len(), "case {case}: classification must be total");

        let closure = closure_components(weights.len(), &edges);
        let core_members: Option<BTreeSet<NodeId>> = match &verdict {
            CoreVerdict::Core(c) => Some(c.members.clone()),
            CoreVerdict::NoCore => None,
        };
        for (id, class) in &classes {
            let i = node_index(id);
            let component = closure.iter().find(|c| c.contains(&i)).unwrap();
            let expected = match &core_members {
                Some(core) if core.iter().any(|m| node_index(m) == i) => {
                    if pair_scan_partial(&graph, core, id) {
                        NodeClass::Peninsula
                    } else {
                        NodeClass::CoreFull
                    }
                }
                _ if component.len() >= 2 => NodeClass::Island,
                _ if edges.contains(&(i, i)) => NodeClass::AddressIsland,
                _ => NodeClass::Down,
            };
            assert_eq!(*class, expected, "case {case}, node {id}");
        }
    }
}

#[test]
fn minimal_coalitions_match_power_set() {
    let root = CounterRng::new(0xc0a1);
    for case in 0..300u64 {
        let rng = root.stream(case);
        let n = 1 + rng.stream_str("n").below(0, 10) as usize;
        let weight_rng = rng.stream_str("w");
        // Every fourth weight is forced to zero to exercise degenerate actors.
        let weights: Vec<u64> = (0..n)
            .map(|i| if weight_rng.below(i as u64, 4) == 0 { 0 } else { weight_rng.below(1000 + i as u64, 1000) })
            .collect();
        if weights.iter().sum::<u64>() == 0 {
            continue;
        }
        let allocations: Vec<ActorAllocation> = weights
            .iter()
            .enumerate()
            .map(|(i, &w)| ActorAllocation {
                actor: format!("a{i:02}"),
                active_v4: w,
                allocated_v4: w,
                allocated_v6_slash32: w,
            })
            .collect();

        let got: BTreeSet<BTreeSet<usize>> = minimal_coalitions(&allocations, WeightField::ActiveV4)
            .unwrap()
            .into_iter()
            .map(|c| {
                c.actors
                    .iter()
                    .map(|a| a.strip_prefix('a').unwrap().parse::<usize>().unwrap())
                    .collect()
            })
            .collect();
        assert_eq!(got, powerset_minimal_coalitions(&weights), "case {case}: {weights:?}");
    }
}

#[test]
fn secession_matches_direct_census() {
    let root = CounterRng::new(0x5ece);
    for case in 0..400u64 {
        let rng = root.stream(case);
        let n = 1 + rng.stream_str("n").below(0, 9) as usize;
        let weight_rng = rng.stream_str("w");
        let weights: Vec<u64> = (0..n).map(|i| weight_rng.below(i as u64, 500)).collect();
        let total: u128 = weights.iter().map(|&w| w as u128).sum();
        if total == 0 {
            continue;
        }
        let allocations: Vec<ActorAllocation> = weights
            .iter()
            .enumerate()
            .map(|(i, &w)| ActorAllocation {
                actor: format!("a{i:02}"),
                active_v4: w,
                allocated_v4: w,
                allocated_v6_slash32: w,
            })
            .collect();
        let pick_rng = rng.stream_str("pick");
        let removed: BTreeSet<String> = (0..n)
            .filter(|&i| pick_rng.below(i as u64, 3) == 0)
            .map(|i| format!("a{i:02}"))
            .collect();
        let gone: u128 = (0..n)
            .filter(|i| removed.contains(&format!("a{i:02}")))
            .map(|i| weights[i] as u128)
            .sum();
        let remaining = total - gone;

        let verdict = secede(&allocations, &removed, WeightField::ActiveV4).unwrap();
        assert!(
            (verdict.remaining_fraction() - remaining as f64 / total as f64).abs() < 1e-12,
            "case {case}: fraction"
        );
        match verdict {
            SecessionVerdict::RemainderIsCore(_) => assert!(2 * remaining > total, "case {case}"),
            SecessionVerdict::Fragmented(_) => assert!(2 * remaining <= total, "case {case}"),
        }
    }
}

fn random_matrix(rng: &CounterRng, vps: usize, rounds: usize) -> ObservationMatrix {
    let vp_names: Vec<String> = (0..vps).map(|i| format!("vp{i}")).collect();
    let mut m = ObservationMatrix::new(vp_names.clone(), vec!["blk".into()], rounds, 660);
    let cell_rng = rng.stream_str("cells");
    for (v, vp) in vp_names.iter().enumerate() {
        for r in 0..rounds {
            let outcome = match cell_rng.below((v * rounds + r) as u64, 3) {
                0 => ProbeOutcome::Positive,
                1 => ProbeOutcome::Negative,
                _ => ProbeOutcome::NoData,
            };
            m.set(vp, "blk", r, outcome).unwrap();
        }
    }
    m
}

#[test]
fn peninsula_extent_matches_recount() {
    let root = CounterRng::new(0xe81e);
    for case in 0..200u64 {
        let rng = root.stream(case);
        let vps = 2 + rng.stream_str("v").below(0, 5) as usize;
        let rounds = 1 + rng.stream_str("r").below(0, 25) as usize;
        let m = random_matrix(&rng, vps, rounds);
        let extent = m.peninsula_extent("blk").unwrap();
        assert_eq!(extent.reaching_vp_fraction.len(), rounds);

        let mut best_run = 0usize;
        let mut run = 0usize;
        for r in 0..rounds {
            let (mut pos, mut neg) = (0usize, 0usize);
            for v in 0..vps {
                match m.get(&format!("vp{v}"), "blk", r).unwrap() {
                    ProbeOutcome::Positive => pos += 1,
                    ProbeOutcome::Negative => neg += 1,
                    ProbeOutcome::NoData => {}
                }
            }
            let expected = if pos + neg == 0 { None } else { Some(pos as f64 / (pos + neg) as f64) };
            assert_eq!(extent.reaching_vp_fraction[r], expected, "case {case}, round {r}");
            let partial = pos > 0 && neg > 0;
            run = if partial { run + 1 } else { 0 };
            best_run = best_run.max(run);
        }
        assert_eq!(extent.max_duration_rounds, best_run, "case {case}");
    }
}

#[test]
fn dns_losses_match_recount() {
    let root = CounterRng::new(0xd05e);
    let window = Window::new(0, 86_400);
    for case in 0..60u64 {
        let rng = root.stream(case);
        let n_vps = 3 + rng.stream_str("n").below(0, 20) as usize;
        let mut measurements = Vec::new();
        for v in 0..n_vps {
            let vp = format!("vp{v:02}");
            let vp_rng = rng.stream(v as u64);
            // A third of vantage points fail everything, a third fail one
            // target, a third mostly succeed; attempt counts vary so some
            // land under the min-attempts bar.
            let style = v % 3;
            for target in 0..TARGET_COUNT {
                let attempts = 2 + vp_rng.stream("att".len() as u64).below(target as u64, 14);
                for q in 0..attempts {
                    let ok = match style {
                        0 => false,
                        1 => target != 4,
                        _ => vp_rng.stream(target as u64).unit(q) >= 0.05,
                    };
                    measurements.push(DnsMeasurement {
                        vp: vp.clone(),
                        family: Family::V4,
                        target,
                        ts: q * 3600,
                        ok,
                    });
                }
            }
        }

        let tags = tag_vps(&measurements, &TagParams::default(), &window).unwrap();
        let report = loss_report(&measurements, &tags, &window).unwrap();

        // Naive recount, straight from the definitions.
        let admits = |pop: Population, tag: Tag| match pop {
            Population::All => true,
            Population::MinusIslands => tag != Tag::Island,
            Population::Clean => tag == Tag::Clean,
        };
        let mut expected: BTreeMap<(Family, u8, Population), (u64, u64, BTreeSet<String>)> =
            BTreeMap::new();
        for m in &measurements {
            let tag = tags[&(m.vp.clone(), m.family)];
            for pop in POPULATIONS {
                if admits(pop, tag) {
                    let cell = expected.entry((m.family, m.target, pop)).or_default();
                    cell.0 += 1;
                    cell.1 += u64::from(!m.ok);
                    cell.2.insert(m.vp.clone());
                }
            }
        }
        assert_eq!(report.rows.len(), expected.len(), "case {case}: cell count");
        for row in &report.rows {
            let (queries, failures, vps) = &expected[&(row.family, row.target, row.population)];
            assert_eq!(row.n_queries, *queries, "case {case}");
            assert_eq!(row.n_vps, vps.len(), "case {case}");
            assert_eq!(row.loss, *failures as f64 / *queries as f64, "case {case}");
        }
    }
}
