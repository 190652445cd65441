//! Graph and allocation-table commands: `core`, `secede`, `coalitions`.

use super::{input_failure, parse_failure, path_str, Ctx, Failure, Outcome, OutputFormat};
use corelens::reachgraph::{
    find_core, minimal_coalitions, parse_edge_list, secede, Coalition, Component, CoreVerdict,
    NodeClass, NodeId, SecessionVerdict, WeightField,
};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

#[derive(Serialize)]
struct CoreReport {
    #[serde(flatten)]
    verdict: CoreVerdict,
    components: Vec<Component>,
    classes: BTreeMap<NodeId, NodeClass>,
}

pub fn core(graph_path: &Path, _ctx: &Ctx) -> Result<Outcome, Failure> {
    let mut outcome = Outcome::new(vec!["core".into(), "--graph".into(), path_str(graph_path)]);
    let text = super::read_input(graph_path, &mut outcome)?;
    let graph = parse_edge_list(&text).map_err(|e| parse_failure(graph_path, e))?;
    let components = graph.components().map_err(|e| input_failure(graph_path, e))?;
    let verdict = find_core(&components);
    let classes = graph
        .classify(&verdict)
        .map_err(|e| Failure::Internal(anyhow::anyhow!("classifying own verdict: {e}")))?;

    outcome.stdout.push(match &verdict {
        CoreVerdict::Core(c) => {
            let members: Vec<&str> = c.members.iter().map(|m| m.as_str()).collect();
            format!("Core {}", members.join(" "))
        }
        CoreVerdict::NoCore => "NoCore".to_string(),
    });
    outcome.push_json("core.json", &CoreReport { verdict, components, classes })?;
    Ok(outcome)
}

#[derive(Serialize)]
struct SecessionReport {
    field: String,
    removed: Vec<String>,
    #[serde(flatten)]
    verdict: SecessionVerdict,
}

pub fn run_secede(
    allocations_path: &Path,
    remove: &[String],
    field: WeightField,
    _ctx: &Ctx,
) -> Result<Outcome, Failure> {
    let removed: BTreeSet<String> = remove
        .iter()
        .flat_map(|v| v.split(','))
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .collect();
    if removed.is_empty() {
        return Err(Failure::input("nothing to remove: --remove names no actors"));
    }
    let removed_list: Vec<String> = removed.iter().cloned().collect();
    let mut outcome = Outcome::new(vec![
        "secede".into(),
        "--allocations".into(),
        path_str(allocations_path),
        "--field".into(),
        field.name().into(),
        "--remove".into(),
        removed_list.join(","),
    ]);
    let text = super::read_input(allocations_path, &mut outcome)?;
    let allocations =
        corelens::reachgraph::parse_allocations_csv(&text).map_err(|e| parse_failure(allocations_path, e))?;
    let verdict =
        secede(&allocations, &removed, field).map_err(|e| input_failure(allocations_path, e))?;

    let name = match verdict {
        SecessionVerdict::RemainderIsCore(_) => "RemainderIsCore",
        SecessionVerdict::Fragmented(_) => "Fragmented",
    };
    outcome.stdout.push(format!("{name} {:.3}", verdict.remaining_fraction()));
    outcome.push_json(
        "secession.json",
        &SecessionReport { field: field.name().into(), removed: removed_list, verdict },
    )?;
    Ok(outcome)
}

#[derive(Serialize)]
struct CoalitionReport {
    field: String,
    actors: usize,
    coalitions: Vec<Coalition>,
}

pub fn coalitions(allocations_path: &Path, field: WeightField, ctx: &Ctx) -> Result<Outcome, Failure> {
    let mut outcome = Outcome::new(vec![
        "coalitions".into(),
        "--allocations".into(),
        path_str(allocations_path),
        "--field".into(),
        field.name().into(),
    ]);
    let text = super::read_input(allocations_path, &mut outcome)?;
    let allocations =
        corelens::reachgraph::parse_allocations_csv(&text).map_err(|e| parse_failure(allocations_path, e))?;
    let found =
        minimal_coalitions(&allocations, field).map_err(|e| input_failure(allocations_path, e))?;

    let smallest = found.first().map_or(0, |c| c.actors.len());
    outcome.stdout.push(format!(
        "{} minimal majority coalitions over {} actors; smallest has {} member{}",
        found.len(),
        allocations.len(),
        smallest,
        if smallest == 1 { "" } else { "s" },
    ));
    if ctx.format == OutputFormat::Csv {
        let mut csv = String::from("size,fraction,actors\n");
        for c in &found {
            csv.push_str(&format!("{},{:.6},{}\n", c.actors.len(), c.fraction, c.actors.join(" ")));
        }
        outcome.push_text("coalitions.csv", csv);
    }
    outcome.push_json(
        "coalitions.json",
        &CoalitionReport { field: field.name().into(), actors: allocations.len(), coalitions: found },
    )?;
    Ok(outcome)
}
