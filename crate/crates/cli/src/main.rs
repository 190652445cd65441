//! Command-line front end for the corelens toolkit.
//!
//! Every command reads its inputs, writes machine-readable reports into the
//! output directory, prints a short summary to stdout, and records a run
//! manifest so the invocation can be reproduced byte-for-byte with `rerun`.
//!
//! Exit codes: 0 on success, 2 for input or format problems (the diagnostic
//! names the offending file and line), 1 for internal errors.

mod commands;
mod manifest;

use clap::{Parser, Subcommand, ValueEnum};
use commands::{Ctx, Failure, Outcome, OutputFormat};
use corelens::reachgraph::WeightField;
use manifest::{sha256_hex, RunManifest, MANIFEST_NAME};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "corelens",
    version,
    about = "Majority-core connectivity analysis: who is still the Internet?"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Directory for output reports and the run manifest
    /// (default: $CORELENS_OUT_DIR, then the current directory).
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    /// Report format; `csv` additionally writes CSV renderings of tabular
    /// reports next to the JSON.
    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,
    /// Seed override for randomized commands.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Find the majority core of a weighted reachability graph.
    Core {
        /// Edge-list graph file.
        #[arg(long)]
        graph: PathBuf,
    },
    /// Label per-round block states from an observation matrix.
    Classify {
        /// Observation matrix file.
        #[arg(long)]
        matrix: PathBuf,
        /// Local liveness evidence CSV (`block,round,alive`).
        #[arg(long)]
        evidence: Option<PathBuf>,
        /// Rounds a mixed-reachability run must persist to count.
        #[arg(long, default_value_t = 2)]
        min_persist: usize,
    },
    /// Replay a probe log through the active-address estimator.
    Estimate {
        /// Probe records JSONL file.
        #[arg(long)]
        replay: PathBuf,
        /// Vantage point to replay (required when the log holds several).
        #[arg(long)]
        vp: Option<String>,
        /// Block to replay (required when the log holds several).
        #[arg(long)]
        block: Option<String>,
        /// Historically-responsive addresses, one per line (default: the
        /// addresses seen in the log).
        #[arg(long)]
        history: Option<PathBuf>,
        /// Demand a full silent sweep before declaring unreachable.
        #[arg(long)]
        exhaustive: bool,
    },
    /// Tag DNS vantage points and decompose query loss.
    Dnsmon {
        /// Measurements JSONL file.
        #[arg(long = "in")]
        input: PathBuf,
        /// Unix start of the 24h window (default: the UTC day of the
        /// earliest measurement).
        #[arg(long)]
        window_start: Option<u64>,
        /// Attempts a target needs before its silence counts.
        #[arg(long)]
        min_attempts: Option<u64>,
        /// Success rate at which a target counts as reached.
        #[arg(long)]
        reach_threshold: Option<f64>,
    },
    /// Judge the remainder after actors leave an allocation table.
    Secede {
        /// Allocation CSV (`actor,active_v4,allocated_v4,allocated_v6_slash32`).
        #[arg(long)]
        allocations: PathBuf,
        /// Actor to remove (repeatable, or comma-separated).
        #[arg(long, required = true)]
        remove: Vec<String>,
        /// Weight column.
        #[arg(long, default_value = "active_v4")]
        field: WeightField,
    },
    /// Enumerate minimal majority coalitions of actors.
    Coalitions {
        /// Allocation CSV (`actor,active_v4,allocated_v4,allocated_v6_slash32`).
        #[arg(long)]
        allocations: PathBuf,
        /// Weight column.
        #[arg(long, default_value = "active_v4")]
        field: WeightField,
    },
    /// Generate a synthetic measurement world with planted events.
    Simulate {
        /// Bundled scenario name.
        #[arg(long)]
        scenario: Option<String>,
        /// Scenario config JSON file.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Score detections against a scenario's planted truth.
    Evaluate {
        /// truth.json written by `simulate`.
        #[arg(long)]
        truth: PathBuf,
        /// timelines.json written by `classify`.
        #[arg(long)]
        timelines: Option<PathBuf>,
        /// tags.csv written by `dnsmon`.
        #[arg(long)]
        tags: Option<PathBuf>,
        /// Endpoint slack, in rounds, for matching timeline segments.
        #[arg(long, default_value_t = 1)]
        tolerance: usize,
    },
    /// Derived reports: recovery lag, transition stage, core link gaps.
    Report {
        #[command(subcommand)]
        kind: ReportKind,
    },
    /// Re-run a recorded command, reproducing its outputs byte-for-byte.
    Rerun {
        /// manifest.json written by a previous run.
        #[arg(long)]
        manifest: PathBuf,
    },
}

#[derive(Subcommand)]
enum ReportKind {
    /// Closed-form believed-active trace while a block recovers.
    Recovery {
        /// Responsive addresses to rediscover.
        #[arg(long)]
        addresses: usize,
        /// Probes the first watch round gets (default 2).
        #[arg(long)]
        first_round_probes: Option<usize>,
    },
    /// Address-family transition stage from two observed fractions.
    Transition {
        /// Fraction of hosts reachable over both families.
        #[arg(long)]
        dual_homed: f64,
        /// Fraction of v6 hosts unreachable over v4.
        #[arg(long)]
        v6_unreachable_v4: f64,
    },
    /// Missing direct mutual links among core members.
    Links {
        /// Edge-list graph file.
        #[arg(long)]
        graph: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli, 0) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(e)) => {
            eprintln!("internal error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli, depth: usize) -> Result<(), Failure> {
    let ctx = Ctx {
        out_dir: cli
            .out_dir
            .clone()
            .or_else(|| std::env::var_os("CORELENS_OUT_DIR").map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from(".")),
        format: match cli.format {
            Some(FormatArg::Csv) => OutputFormat::Csv,
            _ => OutputFormat::Json,
        },
        seed: cli.seed,
    };
    let mut outcome = match &cli.command {
        Command::Core { graph } => commands::graph::core(graph, &ctx)?,
        Command::Classify { matrix, evidence, min_persist } => {
            commands::streams::classify(matrix, evidence.as_deref(), *min_persist, &ctx)?
        }
        Command::Estimate { replay, vp, block, history, exhaustive } => {
            commands::streams::estimate(
                &commands::streams::EstimateArgs {
                    replay,
                    vp: vp.clone(),
                    block: block.clone(),
                    history: history.as_deref(),
                    exhaustive: *exhaustive,
                },
                &ctx,
            )?
        }
        Command::Dnsmon { input, window_start, min_attempts, reach_threshold } => {
            commands::streams::dnsmon(
                &commands::streams::DnsmonArgs {
                    input,
                    window_start: *window_start,
                    min_attempts: *min_attempts,
                    reach_threshold: *reach_threshold,
                },
                &ctx,
            )?
        }
        Command::Secede { allocations, remove, field } => {
            commands::graph::run_secede(allocations, remove, *field, &ctx)?
        }
        Command::Coalitions { allocations, field } => {
            commands::graph::coalitions(allocations, *field, &ctx)?
        }
        Command::Simulate { scenario, config } => {
            commands::sim::simulate(scenario.as_deref(), config.as_deref(), &ctx)?
        }
        Command::Evaluate { truth, timelines, tags, tolerance } => {
            commands::sim::evaluate(truth, timelines.as_deref(), tags.as_deref(), *tolerance, &ctx)?
        }
        Command::Report { kind } => match kind {
            ReportKind::Recovery { addresses, first_round_probes } => {
                commands::report::recovery(*addresses, *first_round_probes, &ctx)?
            }
            ReportKind::Transition { dual_homed, v6_unreachable_v4 } => {
                commands::report::transition(*dual_homed, *v6_unreachable_v4, &ctx)?
            }
            ReportKind::Links { graph } => commands::report::links(graph, &ctx)?,
        },
        Command::Rerun { manifest } => {
            if depth > 0 {
                return Err(Failure::input("a manifest cannot record a rerun"));
            }
            let inner = prepare_rerun(manifest, &ctx)?;
            return run(inner, depth + 1);
        }
    };

    if ctx.format == OutputFormat::Csv {
        outcome.argv.extend(["--format".into(), "csv".into()]);
    }
    if let Some(seed) = cli.seed {
        outcome.argv.extend(["--seed".into(), seed.to_string()]);
        if outcome.seed.is_none() {
            outcome.seed = Some(seed);
        }
    }
    write_outcome(&ctx, outcome)
}

fn write_outcome(ctx: &Ctx, outcome: Outcome) -> Result<(), Failure> {
    std::fs::create_dir_all(&ctx.out_dir).map_err(|e| {
        Failure::Internal(anyhow::anyhow!("creating {}: {e}", ctx.out_dir.display()))
    })?;
    let mut names = Vec::with_capacity(outcome.outputs.len());
    for (name, bytes) in &outcome.outputs {
        let path = ctx.out_dir.join(name);
        std::fs::write(&path, bytes)
            .map_err(|e| Failure::Internal(anyhow::anyhow!("writing {}: {e}", path.display())))?;
        names.push(name.clone());
    }
    let manifest = RunManifest::new(outcome.argv, outcome.seed, outcome.inputs, names);
    let mut bytes = serde_json::to_vec_pretty(&manifest)
        .map_err(|e| Failure::Internal(anyhow::anyhow!("serializing manifest: {e}")))?;
    bytes.push(b'\n');
    let path = ctx.out_dir.join(MANIFEST_NAME);
    std::fs::write(&path, bytes)
        .map_err(|e| Failure::Internal(anyhow::anyhow!("writing {}: {e}", path.display())))?;
    for line in &outcome.stdout {
        println!("{line}");
    }
    Ok(())
}

fn prepare_rerun(manifest_path: &Path, ctx: &Ctx) -> Result<Cli, Failure> {
    let text = std::fs::read_to_string(manifest_path)
        .map_err(|e| Failure::input(format!("cannot read {}: {e}", manifest_path.display())))?;
    let manifest: RunManifest =
        serde_json::from_str(&text).map_err(|e| commands::input_failure(manifest_path, e))?;
    if manifest.argv.is_empty() || manifest.command == "rerun" {
        return Err(Failure::input(format!(
            "{}: manifest does not describe a re-runnable command",
            manifest_path.display()
        )));
    }
    for input in &manifest.inputs {
        let bytes = std::fs::read(&input.path).map_err(|e| {
            Failure::input(format!(
                "{}: recorded input {}: {e}",
                manifest_path.display(),
                input.path
            ))
        })?;
        let now = sha256_hex(&bytes);
        if now != input.sha256 {
            return Err(Failure::input(format!(
                "recorded input {} changed since the manifest was written (sha256 {now} != {})",
                input.path, input.sha256
            )));
        }
    }
    let mut argv: Vec<String> = vec!["corelens".into()];
    argv.extend(manifest.argv.iter().cloned());
    argv.extend(["--out-dir".into(), commands::path_str(&ctx.out_dir)]);
    Cli::try_parse_from(&argv).map_err(|e| {
        Failure::input(format!(
            "{}: recorded argv does not parse: {e}",
            manifest_path.display()
        ))
    })
}
