//! DNS query-loss decomposition across vantage-point populations.
//!
//! Aggregate query loss against a fixed anycast target set mixes three very
//! different stories: vantage points cut off from everything (their loss is
//! about them, not the service), vantage points that reach some targets but
//! not others (partial connectivity), and everyone else's residual loss.
//! This module tags each vantage point per address family within a time
//! window ([`tag_vps`]) and then reports per-target loss over three nested
//! populations ([`loss_report`]):
//!
//! - `all` — every vantage point;
//! - `minus_islands` — without the fully-disconnected ones;
//! - `clean` — only vantage points with full, healthy coverage.
//!
//! The spread between `all` and `clean` is summarized by
//! [`sensitivity_ratio`]: how much of the headline loss the unhealthy
//! vantage points account for.

use crate::ParseError;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use thiserror::Error;

/// Number of monitored targets; target ids run `0..TARGET_COUNT`.
pub const TARGET_COUNT: u8 = 13;

/// Address family of a measurement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    V4,
    V6,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::V4 => write!(f, "v4"),
            Family::V6 => write!(f, "v6"),
        }
    }
}

impl std::str::FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "v4" | "ipv4" | "4" => Ok(Family::V4),
            "v6" | "ipv6" | "6" => Ok(Family::V6),
            other => Err(format!("unknown address family {other:?}")),
        }
    }
}

/// One DNS query attempt from a vantage point to a target.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DnsMeasurement {
    pub vp: String,
    pub family: Family,
    pub target: u8,
    /// Unix timestamp, seconds.
    pub ts: u64,
    pub ok: bool,
}

/// Half-open time window `[start, end)` in unix seconds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub start: u64,
    pub end: u64,
}

pub const SECONDS_PER_DAY: u64 = 86_400;

impl Window {
    pub fn new(start: u64, end: u64) -> Self {
        Window { start, end }
    }

    /// The UTC day containing `ts`.
    pub fn utc_day_of(ts: u64) -> Self {
        let start = ts - ts % SECONDS_PER_DAY;
        Window { start, end: start + SECONDS_PER_DAY }
    }

    pub fn contains(&self, ts: u64) -> bool {
        self.start <= ts && ts < self.end
    }
}

/// Health tag for one (vantage point, family) pair within a window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Tag {
    /// Zero successes with solid attempt coverage of every target: the
    /// vantage point is cut off, not the targets.
    Island,
    /// At least one well-measured target never answered while another
    /// answered at least half the time: partial connectivity.
    Peninsula,
    /// Not enough attempts to certify full healthy coverage.
    Insufficient,
    /// Full coverage, every target attempted enough, some reachability
    /// everywhere it matters.
    Clean,
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl std::str::FromStr for Tag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "island" => Ok(Tag::Island),
            "peninsula" => Ok(Tag::Peninsula),
            "insufficient" => Ok(Tag::Insufficient),
            "clean" => Ok(Tag::Clean),
            other => Err(format!("unknown tag {other:?}")),
        }
    }
}

/// Thresholds for [`tag_vps`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TagParams {
    /// Attempts a target needs before its silence means anything.
    pub min_attempts: u64,
    /// Success rate at which a target counts as reached.
    pub reach_threshold: f64,
}

impl Default for TagParams {
    fn default() -> Self {
        TagParams { min_attempts: 10, reach_threshold: 0.5 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DnsmonError {
    #[error("no measurements fall inside the window")]
    EmptyWindow,
    #[error("vantage point {vp:?} ({family}) has measurements but no tag")]
    MissingTag { vp: String, family: Family },
    #[error("sensitivity ratio undefined: clean loss for {family} target {target} is zero")]
    UndefinedRatio { family: Family, target: u8 },
}

#[derive(Debug, Clone, Copy, Default)]
struct TargetCounts {
    attempts: u64,
    successes: u64,
}

/// Tag every (vantage point, family) pair that has measurements in the
/// window. Precedence: `Island` over `Peninsula` over `Insufficient` over
/// `Clean`.
pub fn tag_vps(
    measurements: &[DnsMeasurement],
    params: &TagParams,
    window: &Window,
) -> Result<BTreeMap<(String, Family), Tag>, DnsmonError> {
    let mut counts: BTreeMap<Family, BTreeMap<String, [TargetCounts; TARGET_COUNT as usize]>> =
        BTreeMap::new();
    let mut any = false;
    for m in measurements {
        if !window.contains(m.ts) {
            continue;
        }
        any = true;
        let per_vp = counts.entry(m.family).or_default();
        let per_target = per_vp.entry(m.vp.clone()).or_insert_with(Default::default);
        let cell = &mut per_target[m.target as usize];
        cell.attempts += 1;
        if m.ok {
            cell.successes += 1;
        }
    }
    if !any {
        return Err(DnsmonError::EmptyWindow);
    }
    let mut tags = BTreeMap::new();
    for (family, per_vp) in counts {
        for (vp, targets) in per_vp {
            tags.insert((vp, family), tag_one(&targets, params));
        }
    }
    Ok(tags)
}

fn tag_one(targets: &[TargetCounts; TARGET_COUNT as usize], params: &TagParams) -> Tag {
    let full_coverage = targets.iter().all(|c| c.attempts >= params.min_attempts);
    let total_successes: u64 = targets.iter().map(|c| c.successes).sum();
    if full_coverage && total_successes == 0 {
        return Tag::Island;
    }
    let has_dead_target = targets
        .iter()
        .any(|c| c.attempts >= params.min_attempts && c.successes == 0);
    let has_reached_target = targets
        .iter()
        .any(|c| c.attempts > 0 && c.successes as f64 / c.attempts as f64 >= params.reach_threshold);
    if has_dead_target && has_reached_target {
        return Tag::Peninsula;
    }
    if full_coverage {
        Tag::Clean
    } else {
        Tag::Insufficient
    }
}

/// Vantage-point population a loss figure is computed over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Population {
    All,
    MinusIslands,
    Clean,
}

pub const POPULATIONS: [Population; 3] =
    [Population::All, Population::MinusIslands, Population::Clean];

impl fmt::Display for Population {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Population::All => write!(f, "all"),
            Population::MinusIslands => write!(f, "minus_islands"),
            Population::Clean => write!(f, "clean"),
        }
    }
}

impl Population {
    fn admits(&self, tag: Tag) -> bool {
        match self {
            Population::All => true,
            Population::MinusIslands => tag != Tag::Island,
            Population::Clean => tag == Tag::Clean,
        }
    }
}

/// Loss of one (family, target, population) cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LossRow {
    pub family: Family,
    pub target: u8,
    pub population: Population,
    /// Failed queries over total queries.
    pub loss: f64,
    pub n_vps: usize,
    pub n_queries: u64,
}

/// Per-target, per-population loss over a window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LossReport {
    pub window: Window,
    pub rows: Vec<LossRow>,
}

impl LossReport {
    pub fn get(&self, family: Family, target: u8, population: Population) -> Option<&LossRow> {
        self.rows
            .iter()
            .find(|r| r.family == family && r.target == target && r.population == population)
    }

    /// Mean loss across targets that have queries, for one family and
    /// population.
    pub fn mean_loss(&self, family: Family, population: Population) -> Option<f64> {
        let losses: Vec<f64> = self
            .rows
            .iter()
            .filter(|r| r.family == family && r.population == population && r.n_queries > 0)
            .map(|r| r.loss)
            .collect();
        if losses.is_empty() {
            None
        } else {
            Some(losses.iter().sum::<f64>() / losses.len() as f64)
        }
    }

    pub fn families(&self) -> BTreeSet<Family> {
        self.rows.iter().map(|r| r.family).collect()
    }
}

/// Compute query loss per (family, target) over the three nested
/// populations. Every vantage point with in-window measurements must appear
/// in `tags`.
pub fn loss_report(
    measurements: &[DnsMeasurement],
    tags: &BTreeMap<(String, Family), Tag>,
    window: &Window,
) -> Result<LossReport, DnsmonError> {
    struct Cell {
        queries: u64,
        failures: u64,
        vps: BTreeSet<String>,
    }
    let mut cells: BTreeMap<(Family, u8, Population), Cell> = BTreeMap::new();
    let mut any = false;
    for m in measurements {
        if !window.contains(m.ts) {
            continue;
        }
        any = true;
        let tag = *tags
            .get(&(m.vp.clone(), m.family))
            .ok_or_else(|| DnsmonError::MissingTag { vp: m.vp.clone(), family: m.family })?;
        for pop in POPULATIONS {
            if !pop.admits(tag) {
                continue;
            }
            let cell = cells.entry((m.family, m.target, pop)).or_insert_with(|| Cell {
                queries: 0,
                failures: 0,
                vps: BTreeSet::new(),
            });
            cell.queries += 1;
            if !m.ok {
                cell.failures += 1;
            }
            if !cell.vps.contains(m.vp.as_str()) {
                cell.vps.insert(m.vp.clone());
            }
        }
    }
    if !any {
        return Err(DnsmonError::EmptyWindow);
    }
    let rows = cells
        .into_iter()
        .map(|((family, target, population), cell)| LossRow {
            family,
            target,
            population,
            loss: cell.failures as f64 / cell.queries as f64,
            n_vps: cell.vps.len(),
            n_queries: cell.queries,
        })
        .collect();
    Ok(LossReport { window: *window, rows })
}

/// Per-family mean, across targets, of `loss_all / loss_clean`: how many
/// times the headline loss overstates what clean vantage points see.
pub fn sensitivity_ratio(report: &LossReport) -> Result<BTreeMap<Family, f64>, DnsmonError> {
    let mut out = BTreeMap::new();
    for family in report.families() {
        let mut ratios = Vec::new();
        for target in 0..TARGET_COUNT {
            let all = match report.get(family, target, Population::All) {
                Some(row) if row.n_queries > 0 => row.loss,
                _ => continue,
            };
            let clean = report
                .get(family, target, Population::Clean)
                .filter(|row| row.n_queries > 0)
                .map(|row| row.loss)
                .unwrap_or(0.0);
            if clean == 0.0 {
                return Err(DnsmonError::UndefinedRatio { family, target });
            }
            ratios.push(all / clean);
        }
        if !ratios.is_empty() {
            out.insert(family, ratios.iter().sum::<f64>() / ratios.len() as f64);
        }
    }
    Ok(out)
}

/// Parse measurements from JSON-lines text, one object per line:
/// `{"vp":"vp-1","family":"v4","target":0,"ts":1658534400,"ok":true}`.
pub fn parse_measurements_jsonl(text: &str) -> Result<Vec<DnsMeasurement>, ParseError> {
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let m: DnsMeasurement = serde_json::from_str(line)
            .map_err(|e| ParseError::new(lineno, format!("bad measurement record: {e}")))?;
        if m.target >= TARGET_COUNT {
            return Err(ParseError::new(
                lineno,
                format!("target {} out of range 0..{TARGET_COUNT}", m.target),
            ));
        }
        out.push(m);
    }
    Ok(out)
}

/// Inverse of [`parse_measurements_jsonl`].
pub fn write_measurements_jsonl(measurements: &[DnsMeasurement]) -> String {
    let mut out = String::new();
    for m in measurements {
        out.push_str(&serde_json::to_string(m).expect("measurement serializes"));
        out.push('\n');
    }
    out
}

/// Render a loss report as CSV with header
/// `family,target,population,loss,n_vps,n_queries`.
pub fn write_loss_csv(report: &LossReport) -> String {
    let mut out = String::from("family,target,population,loss,n_vps,n_queries\n");
    for r in &report.rows {
        out.push_str(&format!(
            "{},{},{},{:.6},{},{}\n",
            r.family, r.target, r.population, r.loss, r.n_vps, r.n_queries
        ));
    }
    out
}
