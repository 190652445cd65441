//! Measurement-stream commands: `classify`, `estimate`, `dnsmon`.

use super::{input_failure, parse_failure, path_str, Ctx, Failure, Outcome, OutputFormat};
use corelens::dnsmon::{
    loss_report, parse_measurements_jsonl, sensitivity_ratio, tag_vps, write_loss_csv,
    DnsmonError, Family, LossRow, Population, Tag, TagParams, Window, POPULATIONS,
};
use corelens::estimator::{ActiveSetEstimate, EstimateSnapshot, ProbeBudget, RoundVerdict};
use corelens::simnet::{parse_probes_jsonl, ProbeRecord};
use corelens::taxonomy::{parse_evidence_csv, parse_matrix, LocalEvidence, Segment};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

#[derive(Serialize, Deserialize)]
pub struct TimelineReport {
    pub min_persist_rounds: usize,
    pub round_seconds: u32,
    pub blocks: BTreeMap<String, Vec<Segment>>,
}

pub fn classify(
    matrix_path: &Path,
    evidence_path: Option<&Path>,
    min_persist: usize,
    ctx: &Ctx,
) -> Result<Outcome, Failure> {
    let mut argv = vec!["classify".into(), "--matrix".into(), path_str(matrix_path)];
    if let Some(p) = evidence_path {
        argv.extend(["--evidence".into(), path_str(p)]);
    }
    argv.extend(["--min-persist".into(), min_persist.to_string()]);
    let mut outcome = Outcome::new(argv);

    let text = super::read_input(matrix_path, &mut outcome)?;
    let matrix = parse_matrix(&text).map_err(|e| parse_failure(matrix_path, e))?;
    let evidence = match evidence_path {
        Some(p) => {
            let text = super::read_input(p, &mut outcome)?;
            parse_evidence_csv(&text).map_err(|e| parse_failure(p, e))?
        }
        None => LocalEvidence::new(),
    };

    let mut blocks = BTreeMap::new();
    for block in matrix.blocks() {
        let segments = matrix
            .classify_timeline(&evidence, block, min_persist)
            .map_err(|e| input_failure(matrix_path, e))?;
        let rendered: Vec<String> = segments
            .iter()
            .map(|s| format!("{}[{}..{})", s.label, s.start, s.end))
            .collect();
        outcome.stdout.push(format!("{block}: {}", rendered.join(" ")));
        blocks.insert(block.clone(), segments);
    }

    if ctx.format == OutputFormat::Csv {
        let mut csv = String::from("block,start,end,label\n");
        for (block, segments) in &blocks {
            for s in segments {
                csv.push_str(&format!("{block},{},{},{}\n", s.start, s.end, s.label));
            }
        }
        outcome.push_text("timelines.csv", csv);
    }
    outcome.push_json(
        "timelines.json",
        &TimelineReport {
            min_persist_rounds: min_persist,
            round_seconds: matrix.round_seconds(),
            blocks,
        },
    )?;
    Ok(outcome)
}

#[derive(Serialize)]
struct ReplayRound {
    round: usize,
    probes: usize,
    removals: usize,
    verdict: RoundVerdict,
    believed_active: usize,
}

#[derive(Serialize)]
struct EstimateReport {
    vp: String,
    block: String,
    exhaustive: bool,
    rounds: Vec<ReplayRound>,
    #[serde(rename = "final")]
    final_state: EstimateSnapshot,
}

pub struct EstimateArgs<'a> {
    pub replay: &'a Path,
    pub vp: Option<String>,
    pub block: Option<String>,
    pub history: Option<&'a Path>,
    pub exhaustive: bool,
}

pub fn estimate(args: &EstimateArgs, ctx: &Ctx) -> Result<Outcome, Failure> {
    let mut outcome = Outcome::new(Vec::new());
    let text = super::read_input(args.replay, &mut outcome)?;
    let records = parse_probes_jsonl(&text).map_err(|e| parse_failure(args.replay, e))?;

    let streams: BTreeSet<(&str, &str)> = records
        .iter()
        .filter(|r| args.vp.as_deref().is_none_or(|v| v == r.vp))
        .filter(|r| args.block.as_deref().is_none_or(|b| b == r.block))
        .map(|r| (r.vp.as_str(), r.block.as_str()))
        .collect();
    let (vp, block) = match streams.len() {
        0 => {
            return Err(Failure::input(format!(
                "{}: no probe records match the requested vantage point and block",
                args.replay.display()
            )))
        }
        1 => {
            let (vp, block) = streams.into_iter().next().unwrap();
            (vp.to_string(), block.to_string())
        }
        n => {
            return Err(Failure::input(format!(
                "{}: {n} estimator streams present; narrow with --vp and --block",
                args.replay.display()
            )))
        }
    };
    let selected: Vec<&ProbeRecord> =
        records.iter().filter(|r| r.vp == vp && r.block == block).collect();

    let history: Vec<String> = match args.history {
        Some(p) => {
            let text = super::read_input(p, &mut outcome)?;
            text.lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .map(String::from)
                .collect()
        }
        None => {
            // Address names sort in ring order, so the probe log itself
            // recovers the history when none is supplied.
            let addrs: BTreeSet<&str> = selected.iter().map(|r| r.address.as_str()).collect();
            addrs.into_iter().map(String::from).collect()
        }
    };

    let mut argv = vec![
        "estimate".into(),
        "--replay".into(),
        path_str(args.replay),
        "--vp".into(),
        vp.clone(),
        "--block".into(),
        block.clone(),
    ];
    if let Some(p) = args.history {
        argv.extend(["--history".into(), path_str(p)]);
    }
    if args.exhaustive {
        argv.push("--exhaustive".into());
    }
    outcome.argv = argv;

    let mut est = ActiveSetEstimate::new(history)
        .map_err(|e| input_failure(args.history.unwrap_or(args.replay), e))?
        .with_exhaustive_confirmation(args.exhaustive);
    let budget = ProbeBudget::default();

    let mut by_round: BTreeMap<usize, Vec<(String, corelens::estimator::ProbeReply)>> =
        BTreeMap::new();
    for r in &selected {
        by_round.entry(r.round).or_default().push((r.address.clone(), r.outcome));
    }
    let mut rounds = Vec::with_capacity(by_round.len());
    for (round, results) in &by_round {
        let report = est
            .apply_round(&budget, results)
            .map_err(|e| input_failure(args.replay, e))?;
        rounds.push(ReplayRound {
            round: *round,
            probes: results.len(),
            removals: report.removals,
            verdict: report.verdict,
            believed_active: est.believed_active_count(),
        });
    }

    outcome.stdout.push(format!(
        "{vp} {block}: {} rounds replayed, believed_active {} of {}",
        rounds.len(),
        est.believed_active_count(),
        est.historically_active().len(),
    ));
    if ctx.format == OutputFormat::Csv {
        let mut csv = String::from("round,believed_active\n");
        for r in &rounds {
            csv.push_str(&format!("{},{}\n", r.round, r.believed_active));
        }
        outcome.push_text("estimate.csv", csv);
    }
    outcome.push_json(
        "estimate.json",
        &EstimateReport {
            vp,
            block,
            exhaustive: args.exhaustive,
            rounds,
            final_state: est.snapshot(),
        },
    )?;
    Ok(outcome)
}

#[derive(Serialize)]
struct FamilySummary {
    tags: BTreeMap<Tag, usize>,
    mean_loss: BTreeMap<Population, f64>,
    sensitivity_ratio: Option<f64>,
}

#[derive(Serialize)]
struct DnsmonReport {
    window: Window,
    params: TagParams,
    families: BTreeMap<Family, FamilySummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    ratio_undefined: Option<String>,
    rows: Vec<LossRow>,
}

pub struct DnsmonArgs<'a> {
    pub input: &'a Path,
    pub window_start: Option<u64>,
    pub min_attempts: Option<u64>,
    pub reach_threshold: Option<f64>,
}

pub fn dnsmon(args: &DnsmonArgs, ctx: &Ctx) -> Result<Outcome, Failure> {
    let mut params = TagParams::default();
    if let Some(v) = args.min_attempts {
        params.min_attempts = v;
    }
    if let Some(v) = args.reach_threshold {
        if !(0.0..=1.0).contains(&v) {
            return Err(Failure::input(format!("--reach-threshold {v} outside [0, 1]")));
        }
        params.reach_threshold = v;
    }

    let mut outcome = Outcome::new(Vec::new());
    let text = super::read_input(args.input, &mut outcome)?;
    let measurements = parse_measurements_jsonl(&text).map_err(|e| parse_failure(args.input, e))?;

    let window = match args.window_start {
        Some(start) => Window::new(start, start + corelens::dnsmon::SECONDS_PER_DAY),
        None => match measurements.iter().map(|m| m.ts).min() {
            Some(first) => Window::utc_day_of(first),
            None => {
                return Err(Failure::input(format!(
                    "{}: EmptyWindow: no measurements to derive a window from",
                    args.input.display()
                )))
            }
        },
    };
    outcome.argv = vec![
        "dnsmon".into(),
        "--in".into(),
        path_str(args.input),
        "--window-start".into(),
        window.start.to_string(),
        "--min-attempts".into(),
        params.min_attempts.to_string(),
        "--reach-threshold".into(),
        params.reach_threshold.to_string(),
    ];

    let empty_window = |e: DnsmonError| {
        Failure::input(format!("{}: {e} in window [{}, {})", args.input.display(), window.start, window.end))
    };
    let tags = tag_vps(&measurements, &params, &window).map_err(empty_window)?;
    let report = loss_report(&measurements, &tags, &window).map_err(empty_window)?;
    let (ratios, ratio_undefined) = match sensitivity_ratio(&report) {
        Ok(r) => (r, None),
        Err(e) => (BTreeMap::new(), Some(e.to_string())),
    };

    let mut families: BTreeMap<Family, FamilySummary> = BTreeMap::new();
    for (&(_, family), &tag) in &tags {
        let summary = families.entry(family).or_insert_with(|| FamilySummary {
            tags: BTreeMap::new(),
            mean_loss: BTreeMap::new(),
            sensitivity_ratio: None,
        });
        *summary.tags.entry(tag).or_insert(0) += 1;
    }
    for (family, summary) in &mut families {
        for pop in POPULATIONS {
            if let Some(loss) = report.mean_loss(*family, pop) {
                summary.mean_loss.insert(pop, loss);
            }
        }
        summary.sensitivity_ratio = ratios.get(family).copied();
        let fmt_loss = |pop: Population| {
            summary.mean_loss.get(&pop).map_or("n/a".to_string(), |l| format!("{l:.6}"))
        };
        outcome.stdout.push(format!(
            "{family}: loss all={} minus_islands={} clean={} ratio={}",
            fmt_loss(Population::All),
            fmt_loss(Population::MinusIslands),
            fmt_loss(Population::Clean),
            summary
                .sensitivity_ratio
                .map_or("undefined".to_string(), |r| format!("{r:.2}")),
        ));
    }
    outcome.stdout.push(format!(
        "tagged {} (vantage point, family) pairs in window [{}, {})",
        tags.len(),
        window.start,
        window.end
    ));

    let mut tags_csv = String::from("vp,family,tag\n");
    for ((vp, family), tag) in &tags {
        tags_csv.push_str(&format!("{vp},{family},{tag}\n"));
    }
    outcome.push_text("tags.csv", tags_csv);
    if ctx.format == OutputFormat::Csv {
        outcome.push_text("loss.csv", write_loss_csv(&report));
    }
    outcome.push_json(
        "dnsmon.json",
        &DnsmonReport { window, params, families, ratio_undefined, rows: report.rows },
    )?;
    Ok(outcome)
}
