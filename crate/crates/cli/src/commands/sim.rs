//! Scenario commands: `simulate`, `evaluate`.

use super::streams::TimelineReport;
use super::{input_failure, path_str, Ctx, Failure, Outcome};
use corelens::dnsmon::{Family, Tag};
use corelens::simnet::eval::{evaluate_tags, evaluate_timelines, EvalReport, TagEvalReport};
use corelens::simnet::{generate, scenarios, write_probes_jsonl, write_traces_csv, ScenarioConfig, TruthLog};
use corelens::taxonomy::{write_evidence_csv, write_matrix};
use serde::Serialize;
use std::collections::BTreeMap;
use std::path::Path;

pub fn simulate(
    scenario: Option<&str>,
    config_path: Option<&Path>,
    ctx: &Ctx,
) -> Result<Outcome, Failure> {
    let mut outcome = Outcome::new(Vec::new());
    let mut config: ScenarioConfig = match (scenario, config_path) {
        (Some(name), None) => {
            outcome.argv = vec!["simulate".into(), "--scenario".into(), name.into()];
            scenarios::by_name(name).map_err(|e| {
                Failure::input(format!("{e}; bundled scenarios: {}", scenarios::BUNDLED.join(", ")))
            })?
        }
        (None, Some(path)) => {
            outcome.argv = vec!["simulate".into(), "--config".into(), path_str(path)];
            let text = super::read_input(path, &mut outcome)?;
            serde_json::from_str(&text).map_err(|e| input_failure(path, e))?
        }
        _ => {
            return Err(Failure::input(
                "pass exactly one of --scenario <name> or --config <file>",
            ))
        }
    };
    if let Some(seed) = ctx.seed {
        config.seed = seed;
    }
    let world = generate(&config).map_err(|e| match config_path {
        Some(path) => input_failure(path, e),
        None => Failure::Internal(anyhow::anyhow!("bundled scenario failed to generate: {e}")),
    })?;

    if let Some(matrix) = &world.matrix {
        outcome.push_text("matrix.txt", write_matrix(matrix));
        outcome.push_text("evidence.csv", write_evidence_csv(&world.evidence));
    }
    if !world.probes.is_empty() {
        outcome.push_text("probes.jsonl", write_probes_jsonl(&world.probes));
    }
    if !world.traces.is_empty() {
        outcome.push_text("traces.csv", write_traces_csv(&world.traces));
    }
    if !world.measurements.is_empty() {
        outcome.push_text(
            "measurements.jsonl",
            corelens::dnsmon::write_measurements_jsonl(&world.measurements),
        );
    }
    outcome.push_json("truth.json", &world.truth)?;

    let names: Vec<&str> = outcome.outputs.iter().map(|(name, _)| name.as_str()).collect();
    outcome.stdout.push(format!(
        "scenario {} (seed {}): wrote {}",
        config.name,
        config.seed,
        names.join(", ")
    ));
    outcome.seed = Some(config.seed);
    Ok(outcome)
}

#[derive(Serialize)]
#[serde(untagged)]
enum EvalOutput {
    Timelines { tolerance: usize, #[serde(flatten)] report: EvalReport },
    Tags(TagEvalReport),
}

pub fn evaluate(
    truth_path: &Path,
    timelines_path: Option<&Path>,
    tags_path: Option<&Path>,
    tolerance: usize,
    _ctx: &Ctx,
) -> Result<Outcome, Failure> {
    let mut outcome = Outcome::new(Vec::new());
    let truth_text = super::read_input(truth_path, &mut outcome)?;
    let truth: TruthLog =
        serde_json::from_str(&truth_text).map_err(|e| input_failure(truth_path, e))?;

    let report = match (timelines_path, tags_path) {
        (Some(path), None) => {
            outcome.argv = vec![
                "evaluate".into(),
                "--truth".into(),
                path_str(truth_path),
                "--timelines".into(),
                path_str(path),
                "--tolerance".into(),
                tolerance.to_string(),
            ];
            let text = super::read_input(path, &mut outcome)?;
            let timelines: TimelineReport =
                serde_json::from_str(&text).map_err(|e| input_failure(path, e))?;
            let report = evaluate_timelines(&timelines.blocks, &truth.events, tolerance);
            outcome.stdout.push(format!(
                "precision={:.3} recall={:.3} ({} matched, {} unmatched truth, {} unmatched predicted)",
                report.precision,
                report.recall,
                report.matched.len(),
                report.unmatched_truth.len(),
                report.unmatched_predicted.len(),
            ));
            EvalOutput::Timelines { tolerance, report }
        }
        (None, Some(path)) => {
            outcome.argv = vec![
                "evaluate".into(),
                "--truth".into(),
                path_str(truth_path),
                "--tags".into(),
                path_str(path),
            ];
            let text = super::read_input(path, &mut outcome)?;
            let predicted = parse_tags_csv(path, &text)?;
            let report = evaluate_tags(&predicted, &truth.dns_tags);
            outcome.stdout.push(format!(
                "tags {}/{} correct (accuracy {:.4})",
                report.correct, report.total, report.accuracy
            ));
            EvalOutput::Tags(report)
        }
        _ => {
            return Err(Failure::input(
                "pass exactly one of --timelines <file> or --tags <file>",
            ))
        }
    };
    outcome.push_json("eval.json", &report)?;
    Ok(outcome)
}

fn parse_tags_csv(path: &Path, text: &str) -> Result<BTreeMap<(String, Family), Tag>, Failure> {
    let mut out = BTreeMap::new();
    let mut header_seen = false;
    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 3 {
            return Err(Failure::input(format!(
                "{}:{lineno}: expected 3 comma-separated fields, got {}",
                path.display(),
                fields.len()
            )));
        }
        if !header_seen {
            if fields != ["vp", "family", "tag"] {
                return Err(Failure::input(format!(
                    "{}:{lineno}: expected header `vp,family,tag`",
                    path.display()
                )));
            }
            header_seen = true;
            continue;
        }
        let family: Family = fields[1]
            .parse()
            .map_err(|e| Failure::input(format!("{}:{lineno}: {e}", path.display())))?;
        let tag: Tag = fields[2]
            .parse()
            .map_err(|e| Failure::input(format!("{}:{lineno}: {e}", path.display())))?;
        if out.insert((fields[0].to_string(), family), tag).is_some() {
            return Err(Failure::input(format!(
                "{}:{lineno}: duplicate tag row for ({}, {family})",
                path.display(),
                fields[0]
            )));
        }
    }
    if !header_seen {
        return Err(Failure::input(format!("{}:1: missing `vp,family,tag` header", path.display())));
    }
    Ok(out)
}
