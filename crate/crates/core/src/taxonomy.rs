//! Multi-vantage-point block state classification.
//!
//! An [`ObservationMatrix`] records, per vantage point (VP), block, and
//! measurement round, whether the VP judged the block reachable. Crossing it
//! with [`LocalEvidence`] — liveness reported from inside a block — yields a
//! per-round label:
//!
//! - all reporting VPs positive → `Up`
//! - all negative, local evidence alive → `Island` (alive but cut off)
//! - all negative, local evidence dead → `Outage`
//! - all negative, no local evidence → `ExternallyDown` (can't tell which)
//! - mixed → `Peninsula` (reachable from some of the network only)
//! - fewer than two reporting VPs → `Unknown`
//!
//! A single mixed round proves little; timelines relabel mixed runs shorter
//! than a persistence threshold as `Transient`.

use crate::ParseError;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use thiserror::Error;

/// Default measurement round length, in seconds (11 minutes).
pub const DEFAULT_ROUND_SECONDS: u32 = 660;

/// Minimum number of reporting (non-`NoData`) VPs for a classifiable round.
pub const MIN_REPORTING_VPS: usize = 2;

/// One cell of the matrix: a VP's judgment of a block in a round.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProbeOutcome {
    Positive,
    Negative,
    /// The VP has no judgment this round (probing gap, VP offline, or the
    /// VP lives inside the block and reports through the evidence channel).
    NoData,
}

impl ProbeOutcome {
    pub fn as_char(self) -> char {
        match self {
            ProbeOutcome::Positive => '+',
            ProbeOutcome::Negative => '-',
            ProbeOutcome::NoData => '.',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            '+' => Some(ProbeOutcome::Positive),
            '-' => Some(ProbeOutcome::Negative),
            '.' => Some(ProbeOutcome::NoData),
            _ => None,
        }
    }
}

/// Block state label for one round or one timeline segment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum StateLabel {
    Up,
    ExternallyDown,
    Outage,
    Island,
    Peninsula,
    Transient,
    Unknown,
}

impl fmt::Display for StateLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TaxonomyError {
    #[error("block {0:?} not in matrix")]
    UnknownBlock(String),
    #[error("vantage point {0:?} not in matrix")]
    UnknownVp(String),
    #[error("round {round} out of range (matrix has {rounds} rounds)")]
    RoundOutOfRange { round: usize, rounds: usize },
    #[error("min_persist_rounds must be at least 1")]
    InvalidPersistence,
}

/// Per-(VP, block, round) observation grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservationMatrix {
    vps: Vec<String>,
    blocks: Vec<String>,
    rounds: usize,
    round_seconds: u32,
    vp_index: HashMap<String, usize>,
    block_index: HashMap<String, usize>,
    cells: Vec<ProbeOutcome>, // [(vp, block) major, round minor]
}

impl ObservationMatrix {
    /// Create a matrix with every cell `NoData`.
    pub fn new(vps: Vec<String>, blocks: Vec<String>, rounds: usize, round_seconds: u32) -> Self {
        let vp_index = vps.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();
        let block_index = blocks.iter().enumerate().map(|(i, b)| (b.clone(), i)).collect();
        let cells = vec![ProbeOutcome::NoData; vps.len() * blocks.len() * rounds];
        ObservationMatrix { vps, blocks, rounds, round_seconds, vp_index, block_index, cells }
    }

    pub fn vps(&self) -> &[String] {
        &self.vps
    }

    pub fn blocks(&self) -> &[String] {
        &self.blocks
    }

    pub fn rounds(&self) -> usize {
        self.rounds
    }

    pub fn round_seconds(&self) -> u32 {
        self.round_seconds
    }

    fn idx(&self, vp: usize, block: usize, round: usize) -> usize {
        (vp * self.blocks.len() + block) * self.rounds + round
    }

    pub fn set(&mut self, vp: &str, block: &str, round: usize, outcome: ProbeOutcome) -> Result<(), TaxonomyError> {
        let v = *self.vp_index.get(vp).ok_or_else(|| TaxonomyError::UnknownVp(vp.into()))?;
        let b = *self.block_index.get(block).ok_or_else(|| TaxonomyError::UnknownBlock(block.into()))?;
        self.check_round(round)?;
        let i = self.idx(v, b, round);
        self.cells[i] = outcome;
        Ok(())
    }

    pub fn get(&self, vp: &str, block: &str, round: usize) -> Result<ProbeOutcome, TaxonomyError> {
        let v = *self.vp_index.get(vp).ok_or_else(|| TaxonomyError::UnknownVp(vp.into()))?;
        let b = *self.block_index.get(block).ok_or_else(|| TaxonomyError::UnknownBlock(block.into()))?;
        self.check_round(round)?;
        Ok(self.cells[self.idx(v, b, round)])
    }

    fn check_round(&self, round: usize) -> Result<(), TaxonomyError> {
        if round >= self.rounds {
            return Err(TaxonomyError::RoundOutOfRange { round, rounds: self.rounds });
        }
        Ok(())
    }

    fn block_id(&self, block: &str) -> Result<usize, TaxonomyError> {
        self.block_index
            .get(block)
            .copied()
            .ok_or_else(|| TaxonomyError::UnknownBlock(block.into()))
    }

    fn tally(&self, block: usize, round: usize) -> (usize, usize) {
        let mut pos = 0;
        let mut neg = 0;
        for v in 0..self.vps.len() {
            match self.cells[self.idx(v, block, round)] {
                ProbeOutcome::Positive => pos += 1,
                ProbeOutcome::Negative => neg += 1,
                ProbeOutcome::NoData => {}
            }
        }
        (pos, neg)
    }

    /// Label one (block, round) cell column.
    pub fn classify_round(
        &self,
        evidence: &LocalEvidence,
        block: &str,
        round: usize,
    ) -> Result<StateLabel, TaxonomyError> {
        let b = self.block_id(block)?;
        self.check_round(round)?;
        let (pos, neg) = self.tally(b, round);
        Ok(if pos + neg < MIN_REPORTING_VPS {
            StateLabel::Unknown
        } else if neg == 0 {
            StateLabel::Up
        } else if pos == 0 {
            match evidence.get(block, round) {
                Some(true) => StateLabel::Island,
                Some(false) => StateLabel::Outage,
                None => StateLabel::ExternallyDown,
            }
        } else {
            StateLabel::Peninsula
        })
    }

    /// Label every round of a block and merge into segments, relabeling
    /// mixed-reachability (Peninsula) runs shorter than `min_persist_rounds`
    /// as `Transient`. Segments cover all rounds without overlap.
    pub fn classify_timeline(
        &self,
        evidence: &LocalEvidence,
        block: &str,
        min_persist_rounds: usize,
    ) -> Result<Vec<Segment>, TaxonomyError> {
        if min_persist_rounds == 0 {
            return Err(TaxonomyError::InvalidPersistence);
        }
        self.block_id(block)?;
        let mut segments: Vec<Segment> = Vec::new();
        for round in 0..self.rounds {
            let label = self.classify_round(evidence, block, round)?;
            match segments.last_mut() {
                Some(seg) if seg.label == label => seg.end = round + 1,
                _ => segments.push(Segment { start: round, end: round + 1, label }),
            }
        }
        for seg in &mut segments {
            if seg.label == StateLabel::Peninsula && seg.len() < min_persist_rounds {
                seg.label = StateLabel::Transient;
            }
        }
        Ok(segments)
    }

    /// Per-round fraction of reporting VPs that reached the block (`None`
    /// when no VP reported), plus the longest run of rounds with a fraction
    /// strictly between 0 and 1 — the maximum peninsula duration.
    pub fn peninsula_extent(&self, block: &str) -> Result<ExtentReport, TaxonomyError> {
        let b = self.block_id(block)?;
        let mut per_round = Vec::with_capacity(self.rounds);
        let mut max_run = 0usize;
        let mut run = 0usize;
        for round in 0..self.rounds {
            let (pos, neg) = self.tally(b, round);
            let fraction = if pos + neg == 0 { None } else { Some(pos as f64 / (pos + neg) as f64) };
            let partial = matches!(fraction, Some(f) if f > 0.0 && f < 1.0);
            run = if partial { run + 1 } else { 0 };
            max_run = max_run.max(run);
            per_round.push(fraction);
        }
        Ok(ExtentReport { reaching_vp_fraction: per_round, max_duration_rounds: max_run })
    }
}

/// Contiguous run of rounds sharing a label; `end` is exclusive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segment {
    pub start: usize,
    pub end: usize,
    pub label: StateLabel,
}

impl Segment {
    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.end == self.start
    }
}

/// Partial-reachability extent of one block.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtentReport {
    pub reaching_vp_fraction: Vec<Option<f64>>,
    pub max_duration_rounds: usize,
}

/// In-block liveness: per (block, round), did a vantage point hosted inside
/// the block observe its local network alive? Only meaningful for blocks
/// that host a VP; absence of an entry means no in-block view exists.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LocalEvidence {
    entries: BTreeMap<(String, usize), bool>,
}

impl LocalEvidence {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, block: &str, round: usize, alive: bool) {
        self.entries.insert((block.to_string(), round), alive);
    }

    pub fn get(&self, block: &str, round: usize) -> Option<bool> {
        self.entries.get(&(block.to_string(), round)).copied()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, usize, bool)> {
        self.entries.iter().map(|((b, r), &a)| (b.as_str(), *r, a))
    }
}

/// Parse the matrix text format:
///
/// ```text
/// #vps=2 blocks=1 rounds=4 round_seconds=660
/// vp-e blk-1 ++-.
/// vp-w blk-1 +++-
/// ```
///
/// One line per (vp, block) pair, every pair present exactly once, each
/// round string over `+` (positive), `-` (negative), `.` (no data).
pub fn parse_matrix(text: &str) -> Result<ObservationMatrix, ParseError> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| ParseError::new(1, "empty matrix file"))?;
    let header_fields = parse_matrix_header(header)?;
    let (n_vps, n_blocks, rounds, round_seconds) = header_fields;

    let mut vps: Vec<String> = Vec::new();
    let mut blocks: Vec<String> = Vec::new();
    let mut rows: Vec<(usize, String, String, String)> = Vec::new();
    for (lineno, raw) in lines {
        let lineno = lineno + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let (vp, block, cells) = match (parts.next(), parts.next(), parts.next(), parts.next()) {
            (Some(v), Some(b), Some(c), None) => (v, b, c),
            _ => return Err(ParseError::new(lineno, "expected `<vp> <block> <rounds-string>`")),
        };
        if cells.chars().count() != rounds {
            return Err(ParseError::new(
                lineno,
                format!("round string has {} cells, header says {rounds}", cells.chars().count()),
            ));
        }
        if !vps.iter().any(|v| v == vp) {
            vps.push(vp.to_string());
        }
        if !blocks.iter().any(|b| b == block) {
            blocks.push(block.to_string());
        }
        rows.push((lineno, vp.to_string(), block.to_string(), cells.to_string()));
    }
    if vps.len() != n_vps {
        return Err(ParseError::new(1, format!("header says {n_vps} vps, found {}", vps.len())));
    }
    if blocks.len() != n_blocks {
        return Err(ParseError::new(1, format!("header says {n_blocks} blocks, found {}", blocks.len())));
    }
    if rows.len() != n_vps * n_blocks {
        return Err(ParseError::new(
            1,
            format!("expected {} (vp, block) rows, found {}", n_vps * n_blocks, rows.len()),
        ));
    }

    let mut m = ObservationMatrix::new(vps, blocks, rounds, round_seconds);
    let mut seen: BTreeMap<(String, String), usize> = BTreeMap::new();
    for (lineno, vp, block, cells) in rows {
        if let Some(first) = seen.insert((vp.clone(), block.clone()), lineno) {
            return Err(ParseError::new(
                lineno,
                format!("duplicate row for ({vp}, {block}); first at line {first}"),
            ));
        }
        for (round, c) in cells.chars().enumerate() {
            let outcome = ProbeOutcome::from_char(c)
                .ok_or_else(|| ParseError::new(lineno, format!("invalid cell {c:?}; expected one of + - .")))?;
            m.set(&vp, &block, round, outcome).expect("row indices were just created");
        }
    }
    Ok(m)
}

fn parse_matrix_header(header: &str) -> Result<(usize, usize, usize, u32), ParseError> {
    let bad = |msg: String| ParseError::new(1, format!("bad matrix header: {msg}"));
    if !header.starts_with("#vps=") {
        return Err(bad("must start with `#vps=`".into()));
    }
    let mut pairs: HashMap<&str, &str> = HashMap::new();
    for part in header.trim_start_matches('#').split_whitespace() {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| bad(format!("expected key=value, got {part:?}")))?;
        match k {
            "vps" | "blocks" | "rounds" | "round_seconds" => pairs.insert(k, v),
            _ => return Err(bad(format!("unknown header key {k:?}"))),
        };
    }
    let get = |key: &str| -> Result<u64, ParseError> {
        let v = pairs.get(key).ok_or_else(|| bad(format!("missing {key}")))?;
        v.parse().map_err(|_| bad(format!("invalid {key} value {v:?}")))
    };
    Ok((
        get("vps")? as usize,
        get("blocks")? as usize,
        get("rounds")? as usize,
        get("round_seconds")? as u32,
    ))
}

/// Inverse of [`parse_matrix`]; rows in (vp, block) index order.
pub fn write_matrix(m: &ObservationMatrix) -> String {
    let mut out = format!(
        "#vps={} blocks={} rounds={} round_seconds={}\n",
        m.vps.len(),
        m.blocks.len(),
        m.rounds,
        m.round_seconds
    );
    for vp in &m.vps {
        for block in &m.blocks {
            let cells: String = (0..m.rounds)
                .map(|r| m.get(vp, block, r).expect("in range").as_char())
                .collect();
            out.push_str(&format!("{vp} {block} {cells}\n"));
        }
    }
    out
}

/// Parse local-evidence CSV: header `block,round,alive`, rows like
/// `blk-1,4,true` (alive also accepts 1/0).
pub fn parse_evidence_csv(text: &str) -> Result<LocalEvidence, ParseError> {
    let mut ev = LocalEvidence::new();
    let mut header_seen = false;
    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if !header_seen {
            if line != "block,round,alive" {
                return Err(ParseError::new(lineno, "expected header `block,round,alive`"));
            }
            header_seen = true;
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 3 {
            return Err(ParseError::new(lineno, format!("expected 3 fields, got {}", fields.len())));
        }
        let round: usize = fields[1]
            .parse()
            .map_err(|_| ParseError::new(lineno, format!("invalid round {:?}", fields[1])))?;
        let alive = match fields[2] {
            "true" | "1" => true,
            "false" | "0" => false,
            other => return Err(ParseError::new(lineno, format!("invalid alive flag {other:?}"))),
        };
        ev.set(fields[0], round, alive);
    }
    if !header_seen {
        return Err(ParseError::new(1, "missing evidence CSV header"));
    }
    Ok(ev)
}

/// Inverse of [`parse_evidence_csv`], rows sorted by (block, round).
pub fn write_evidence_csv(ev: &LocalEvidence) -> String {
    let mut out = String::from("block,round,alive\n");
    for (block, round, alive) in ev.iter() {
        out.push_str(&format!("{block},{round},{alive}\n"));
    }
    out
}
