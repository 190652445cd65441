//! Scoring detections against planted truth.
//!
//! [`evaluate_timelines`] matches classified timeline segments against
//! planted events with a round tolerance, greedily and one-to-one, and
//! reports precision and recall over event-like segments.
//! [`evaluate_tags`] compares DNS vantage-point tags exactly.

use super::{EventKind, PlantedEvent, TagTruth};
use crate::dnsmon::{Family, Tag};
use crate::taxonomy::{Segment, StateLabel};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// A timeline segment that claims an event.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredictedEvent {
    pub block: String,
    pub segment: Segment,
}

/// A matched (truth, prediction) pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchedEvent {
    pub truth: PlantedEvent,
    pub predicted: PredictedEvent,
}

/// Outcome of matching timelines against planted events.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub precision: f64,
    pub recall: f64,
    pub matched: Vec<MatchedEvent>,
    pub unmatched_truth: Vec<PlantedEvent>,
    pub unmatched_predicted: Vec<PredictedEvent>,
}

/// Does a segment label claim the planted kind? `ExternallyDown` is the
/// honest answer when no inside evidence exists, so it matches either of
/// the states it cannot distinguish.
fn label_claims(label: StateLabel, kind: EventKind) -> bool {
    match label {
        StateLabel::Island => kind == EventKind::Island,
        StateLabel::Outage => kind == EventKind::Outage,
        StateLabel::Peninsula => kind == EventKind::Peninsula,
        StateLabel::ExternallyDown => matches!(kind, EventKind::Island | EventKind::Outage),
        StateLabel::Up | StateLabel::Transient | StateLabel::Unknown => false,
    }
}

fn is_event_label(label: StateLabel) -> bool {
    matches!(
        label,
        StateLabel::Island | StateLabel::Outage | StateLabel::Peninsula | StateLabel::ExternallyDown
    )
}

fn within(a: usize, b: usize, tolerance: usize) -> bool {
    a.abs_diff(b) <= tolerance
}

/// Match classified timelines (one segment list per block) against planted
/// events. A prediction matches a truth event when it is on the same
/// block, its label claims the planted kind, and both endpoints land
/// within `tolerance` rounds. Matching is greedy in truth order and
/// one-to-one. Precision is over event-like segments (Up, Transient, and
/// Unknown segments claim nothing); with no event-like segments precision
/// is 1, and with no planted events recall is 1.
pub fn evaluate_timelines(
    timelines: &BTreeMap<String, Vec<Segment>>,
    truth: &[PlantedEvent],
    tolerance: usize,
) -> EvalReport {
    let mut predicted: Vec<PredictedEvent> = Vec::new();
    for (block, segments) in timelines {
        for seg in segments {
            if is_event_label(seg.label) {
                predicted.push(PredictedEvent { block: block.clone(), segment: *seg });
            }
        }
    }
    let mut used = vec![false; predicted.len()];
    let mut matched = Vec::new();
    let mut unmatched_truth = Vec::new();
    for event in truth {
        let candidate = predicted.iter().enumerate().find(|(i, p)| {
            !used[*i]
                && p.block == event.block
                && label_claims(p.segment.label, event.kind)
                && within(p.segment.start, event.start_round, tolerance)
                && within(p.segment.end, event.end_round, tolerance)
        });
        match candidate {
            Some((i, p)) => {
                used[i] = true;
                matched.push(MatchedEvent { truth: event.clone(), predicted: p.clone() });
            }
            None => unmatched_truth.push(event.clone()),
        }
    }
    let unmatched_predicted: Vec<PredictedEvent> = predicted
        .into_iter()
        .zip(used)
        .filter(|(_, u)| !u)
        .map(|(p, _)| p)
        .collect();
    let n_predicted = matched.len() + unmatched_predicted.len();
    let precision = if n_predicted == 0 { 1.0 } else { matched.len() as f64 / n_predicted as f64 };
    let recall = if truth.is_empty() { 1.0 } else { matched.len() as f64 / truth.len() as f64 };
    EvalReport { precision, recall, matched, unmatched_truth, unmatched_predicted }
}

/// One tag disagreement.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TagMismatch {
    pub vp: String,
    pub family: Family,
    pub expected: Tag,
    pub actual: Option<Tag>,
}

/// Outcome of comparing predicted tags against planted ones.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TagEvalReport {
    pub total: usize,
    pub correct: usize,
    pub accuracy: f64,
    pub mismatches: Vec<TagMismatch>,
}

impl TagEvalReport {
    pub fn is_exact(&self) -> bool {
        self.mismatches.is_empty() && self.total > 0
    }
}

/// Compare predicted tags to planted truth, exactly. Every truth row must
/// be present and equal; extra predicted tags are ignored (truth defines
/// the scored set).
pub fn evaluate_tags(
    predicted: &BTreeMap<(String, Family), Tag>,
    truth: &[TagTruth],
) -> TagEvalReport {
    let mut correct = 0;
    let mut mismatches = Vec::new();
    for t in truth {
        match predicted.get(&(t.vp.clone(), t.family)) {
            Some(&tag) if tag == t.tag => correct += 1,
            other => mismatches.push(TagMismatch {
                vp: t.vp.clone(),
                family: t.family,
                expected: t.tag,
                actual: other.copied(),
            }),
        }
    }
    let total = truth.len();
    let accuracy = if total == 0 { 1.0 } else { correct as f64 / total as f64 };
    TagEvalReport { total, correct, accuracy, mismatches }
}
