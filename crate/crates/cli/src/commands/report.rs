//! Derived reports: recovery lag, transition staging, core link gaps.

use super::{input_failure, parse_failure, path_str, Ctx, Failure, Outcome, OutputFormat};
use corelens::estimator::{recovery_trace, ProbeBudget, PROBES_WHEN_DOWN};
use corelens::reachgraph::{
    find_core, parse_edge_list, transition_stage, NodeId, TransitionStage,
};
use serde::Serialize;
use std::collections::BTreeMap;
use std::path::Path;

#[derive(Serialize)]
struct RecoveryReport {
    addresses: usize,
    first_round_probes: usize,
    rounds: usize,
    trace: Vec<usize>,
}

pub fn recovery(addresses: usize, first_round_probes: Option<usize>, ctx: &Ctx) -> Result<Outcome, Failure> {
    if addresses == 0 {
        return Err(Failure::input("--addresses must be at least 1"));
    }
    let first = first_round_probes.unwrap_or(PROBES_WHEN_DOWN);
    let mut outcome = Outcome::new(vec![
        "report".into(),
        "recovery".into(),
        "--addresses".into(),
        addresses.to_string(),
        "--first-round-probes".into(),
        first.to_string(),
    ]);
    let trace = recovery_trace(addresses, &ProbeBudget::default(), first);
    outcome.stdout.push(format!(
        "recovery of {addresses} address{} takes {} round{}",
        if addresses == 1 { "" } else { "es" },
        trace.len(),
        if trace.len() == 1 { "" } else { "s" },
    ));
    if ctx.format == OutputFormat::Csv {
        let mut csv = String::from("round,believed_active\n");
        for (i, count) in trace.iter().enumerate() {
            csv.push_str(&format!("{},{count}\n", i + 1));
        }
        outcome.push_text("recovery.csv", csv);
    }
    outcome.push_json(
        "recovery.json",
        &RecoveryReport { addresses, first_round_probes: first, rounds: trace.len(), trace },
    )?;
    Ok(outcome)
}

#[derive(Serialize)]
struct TransitionReport {
    dual_homed_fraction: f64,
    v6_unreachable_v4_fraction: f64,
    stage: TransitionStage,
}

pub fn transition(dual_homed: f64, v6_unreachable_v4: f64, _ctx: &Ctx) -> Result<Outcome, Failure> {
    let mut outcome = Outcome::new(vec![
        "report".into(),
        "transition".into(),
        "--dual-homed".into(),
        dual_homed.to_string(),
        "--v6-unreachable-v4".into(),
        v6_unreachable_v4.to_string(),
    ]);
    let stage = transition_stage(dual_homed, v6_unreachable_v4)
        .map_err(|e| Failure::input(e.to_string()))?;
    outcome.stdout.push(stage.to_string());
    outcome.push_json(
        "transition.json",
        &TransitionReport {
            dual_homed_fraction: dual_homed,
            v6_unreachable_v4_fraction: v6_unreachable_v4,
            stage,
        },
    )?;
    Ok(outcome)
}

#[derive(Serialize)]
struct LinksReport {
    core_members: Vec<NodeId>,
    missing_links: BTreeMap<NodeId, usize>,
}

pub fn links(graph_path: &Path, _ctx: &Ctx) -> Result<Outcome, Failure> {
    let mut outcome = Outcome::new(vec![
        "report".into(),
        "links".into(),
        "--graph".into(),
        path_str(graph_path),
    ]);
    let text = super::read_input(graph_path, &mut outcome)?;
    let graph = parse_edge_list(&text).map_err(|e| parse_failure(graph_path, e))?;
    let components = graph.components().map_err(|e| input_failure(graph_path, e))?;
    let verdict = find_core(&components);
    let missing = graph
        .missing_core_links(&verdict)
        .map_err(|e| Failure::Internal(anyhow::anyhow!("link census on own verdict: {e}")))?;

    if missing.is_empty() {
        outcome.stdout.push("NoCore".to_string());
    } else {
        let partial = missing.values().filter(|&&m| m > 0).count();
        outcome
            .stdout
            .push(format!("{partial} of {} core members lack direct mutual links", missing.len()));
        for (id, count) in &missing {
            outcome.stdout.push(format!("{id} {count}"));
        }
    }
    let core_members = match &verdict {
        corelens::reachgraph::CoreVerdict::Core(c) => c.members.iter().cloned().collect(),
        corelens::reachgraph::CoreVerdict::NoCore => Vec::new(),
    };
    outcome.push_json("links.json", &LinksReport { core_members, missing_links: missing })?;
    Ok(outcome)
}
