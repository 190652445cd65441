//! Secession and coalition arithmetic over address-allocation tables.
//!
//! Given a list of actors with address counts, the questions are: if some set
//! of actors walks away, does the remainder still hold a strict majority of
//! the chosen weight column? And which minimal coalitions could take a
//! majority with them?
//!
//! The actor list is treated as a partition: fractions are computed against
//! the sum over the whole list, so the caller must pass disjoint actors.

use crate::ParseError;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// One actor's address holdings. IPv4 columns share a unit (any fixed unit —
/// the bundled fixtures use millions); the IPv6 column counts /32 allocations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActorAllocation {
    pub actor: String,
    pub active_v4: u64,
    pub allocated_v4: u64,
    pub allocated_v6_slash32: u64,
}

/// Which column weighs the actors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightField {
    ActiveV4,
    AllocatedV4,
    AllocatedV6,
}

impl WeightField {
    pub fn of(&self, a: &ActorAllocation) -> u64 {
        match self {
            WeightField::ActiveV4 => a.active_v4,
            WeightField::AllocatedV4 => a.allocated_v4,
            WeightField::AllocatedV6 => a.allocated_v6_slash32,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            WeightField::ActiveV4 => "active_v4",
            WeightField::AllocatedV4 => "allocated_v4",
            WeightField::AllocatedV6 => "allocated_v6",
        }
    }
}

impl fmt::Display for WeightField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for WeightField {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "active_v4" => Ok(WeightField::ActiveV4),
            "allocated_v4" => Ok(WeightField::AllocatedV4),
            "allocated_v6" | "allocated_v6_slash32" => Ok(WeightField::AllocatedV6),
            other => Err(format!("unknown weight field {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AllocError {
    #[error("actor {0:?} not in allocation list")]
    ActorNotFound(String),
    #[error("duplicate actor {0:?} in allocation list")]
    DuplicateActor(String),
    #[error("{actors} actors exceed the exhaustive-enumeration cap of {max}")]
    InputTooLarge { actors: usize, max: usize },
    #[error("total weight of column {0} is zero")]
    ZeroTotalWeight(WeightField),
}

/// Verdict on the actors left behind after a secession.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", content = "remaining_fraction")]
pub enum SecessionVerdict {
    /// The remainder keeps a strict majority of the column.
    RemainderIsCore(f64),
    /// The remainder holds half or less: no one side is the core any more.
    Fragmented(f64),
}

impl SecessionVerdict {
    pub fn remaining_fraction(&self) -> f64 {
        match self {
            SecessionVerdict::RemainderIsCore(f) | SecessionVerdict::Fragmented(f) => *f,
        }
    }
}

/// Remove `removed` actors and judge the remainder against the list total.
pub fn secede(
    allocations: &[ActorAllocation],
    removed: &BTreeSet<String>,
    field: WeightField,
) -> Result<SecessionVerdict, AllocError> {
    check_unique(allocations)?;
    for name in removed {
        if !allocations.iter().any(|a| &a.actor == name) {
            return Err(AllocError::ActorNotFound(name.clone()));
        }
    }
    let total: u128 = allocations.iter().map(|a| field.of(a) as u128).sum();
    if total == 0 {
        return Err(AllocError::ZeroTotalWeight(field));
    }
    let gone: u128 = allocations
        .iter()
        .filter(|a| removed.contains(&a.actor))
        .map(|a| field.of(a) as u128)
        .sum();
    let remaining = total - gone;
    let fraction = remaining as f64 / total as f64;
    // Strict majority, judged in integers so 0.5 exactly never sneaks through.
    Ok(if 2 * remaining > total {
        SecessionVerdict::RemainderIsCore(fraction)
    } else {
        SecessionVerdict::Fragmented(fraction)
    })
}

/// A set of actors jointly holding a strict majority.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Coalition {
    pub actors: Vec<String>,
    pub fraction: f64,
}

/// Exhaustive enumeration is capped here; beyond this the power set is not
/// worth walking and the caller should aggregate actors first.
pub const MAX_COALITION_ACTORS: usize = 20;

/// All inclusion-minimal actor sets whose joint weight is a strict majority.
///
/// Monotonicity of non-negative weights reduces the minimality check to:
/// every strict subset obtained by dropping one member loses the majority.
/// Sorted by size, then descending fraction, then member list.
pub fn minimal_coalitions(
    allocations: &[ActorAllocation],
    field: WeightField,
) -> Result<Vec<Coalition>, AllocError> {
    check_unique(allocations)?;
    let n = allocations.len();
    if n > MAX_COALITION_ACTORS {
        return Err(AllocError::InputTooLarge { actors: n, max: MAX_COALITION_ACTORS });
    }
    let weights: Vec<u128> = allocations.iter().map(|a| field.of(a) as u128).collect();
    let total: u128 = weights.iter().sum();
    if total == 0 {
        return Err(AllocError::ZeroTotalWeight(field));
    }
    let majority = |w: u128| 2 * w > total;

    let mut out = Vec::new();
    for mask in 1u32..(1u32 << n) {
        let sum: u128 = (0..n).filter(|i| mask & (1 << i) != 0).map(|i| weights[i]).sum();
        if !majority(sum) {
            continue;
        }
        let minimal = (0..n)
            .filter(|i| mask & (1 << i) != 0)
            .all(|i| !majority(sum - weights[i]));
        if minimal {
            let mut actors: Vec<String> = (0..n)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| allocations[i].actor.clone())
                .collect();
            actors.sort();
            out.push(Coalition { actors, fraction: sum as f64 / total as f64 });
        }
    }
    out.sort_by(|a, b| {
        a.actors
            .len()
            .cmp(&b.actors.len())
            .then(b.fraction.total_cmp(&a.fraction))
            .then_with(|| a.actors.cmp(&b.actors))
    });
    Ok(out)
}

fn check_unique(allocations: &[ActorAllocation]) -> Result<(), AllocError> {
    let mut seen = BTreeSet::new();
    for a in allocations {
        if !seen.insert(&a.actor) {
            return Err(AllocError::DuplicateActor(a.actor.clone()));
        }
    }
    Ok(())
}

/// Parse `actor,active_v4,allocated_v4,allocated_v6_slash32` CSV. A header
/// row with those names is required; `#` lines are comments. Fields never
/// contain commas, so no quoting is supported.
pub fn parse_allocations_csv(text: &str) -> Result<Vec<ActorAllocation>, ParseError> {
    let mut rows = Vec::new();
    let mut header_seen = false;
    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 4 {
            return Err(ParseError::new(lineno, format!("expected 4 comma-separated fields, got {}", fields.len())));
        }
        if !header_seen {
            if fields != ["actor", "active_v4", "allocated_v4", "allocated_v6_slash32"] {
                return Err(ParseError::new(
                    lineno,
                    "expected header `actor,active_v4,allocated_v4,allocated_v6_slash32`",
                ));
            }
            header_seen = true;
            continue;
        }
        let num = |s: &str, what: &str| -> Result<u64, ParseError> {
            s.parse().map_err(|_| ParseError::new(lineno, format!("invalid {what} {s:?}")))
        };
        let row = ActorAllocation {
            actor: fields[0].to_string(),
            active_v4: num(fields[1], "active_v4")?,
            allocated_v4: num(fields[2], "allocated_v4")?,
            allocated_v6_slash32: num(fields[3], "allocated_v6_slash32")?,
        };
        if row.active_v4 > row.allocated_v4 {
            return Err(ParseError::new(
                lineno,
                format!("active_v4 {} exceeds allocated_v4 {} for {}", row.active_v4, row.allocated_v4, row.actor),
            ));
        }
        rows.push(row);
    }
    if !header_seen {
        return Err(ParseError::new(1, "missing allocation CSV header"));
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn actors(rows: &[(&str, u64)]) -> Vec<ActorAllocation> {
        rows.iter()
            .map(|(name, w)| ActorAllocation {
                actor: (*name).to_string(),
                active_v4: *w,
                allocated_v4: *w,
                allocated_v6_slash32: *w,
            })
            .collect()
    }

    fn removed(names: &[&str]) -> BTreeSet<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn removing_nothing_keeps_everything() {
        let list = actors(&[("a", 10), ("b", 5)]);
        let v = secede(&list, &removed(&[]), WeightField::ActiveV4).unwrap();
        assert_eq!(v, SecessionVerdict::RemainderIsCore(1.0));
    }

    #[test]
    fn five_registry_rows_lose_majority_when_three_leave() {
        // The five-registry active_v4 split: removing the three largest
        // (579 of 676) leaves ≈ 14.3% — fragmented.
        let list = actors(&[("AFRINIC", 15), ("APNIC", 223), ("ARIN", 150), ("LACNIC", 82), ("RIPE NCC", 206)]);
        let v = secede(&list, &removed(&["ARIN", "RIPE NCC", "APNIC"]), WeightField::ActiveV4).unwrap();
        let SecessionVerdict::Fragmented(f) = v else { panic!("expected fragmentation, got {v:?}") };
        assert!((f - 97.0 / 676.0).abs() < 1e-9);
        assert!((f - 0.1435).abs() < 0.001);
    }

    #[test]
    fn unknown_actor_errors() {
        let list = actors(&[("a", 1)]);
        assert_eq!(
            secede(&list, &removed(&["nobody"]), WeightField::ActiveV4).unwrap_err(),
            AllocError::ActorNotFound("nobody".into())
        );
    }

    #[test]
    fn exact_half_is_fragmented() {
        let list = actors(&[("a", 1), ("b", 1)]);
        let v = secede(&list, &removed(&["a"]), WeightField::ActiveV4).unwrap();
        assert_eq!(v, SecessionVerdict::Fragmented(0.5), "strict majority everywhere");
    }

    #[test]
    fn single_dominant_coalition() {
        let list = actors(&[("big", 51), ("mid", 30), ("small", 19)]);
        let got = minimal_coalitions(&list, WeightField::ActiveV4).unwrap();
        assert_eq!(got.len(), 1);
        assert_eq!(got[0].actors, vec!["big"]);
        assert!((got[0].fraction - 0.51).abs() < 1e-9);
    }

    #[test]
    fn coalitions_are_minimal_and_sorted() {
        let list = actors(&[("a", 40), ("b", 35), ("c", 25)]);
        let got = minimal_coalitions(&list, WeightField::ActiveV4).unwrap();
        // Any two of the three actors qualify; no singleton does.
        assert_eq!(got.len(), 3);
        assert!(got.iter().all(|c| c.actors.len() == 2));
        assert!(got[0].fraction >= got[1].fraction && got[1].fraction >= got[2].fraction);
        assert_eq!(got[0].actors, vec!["a", "b"]);
    }

    #[test]
    fn five_registry_rows_have_no_singleton_coalition() {
        let list = actors(&[("AFRINIC", 15), ("APNIC", 223), ("ARIN", 150), ("LACNIC", 82), ("RIPE NCC", 206)]);
        let got = minimal_coalitions(&list, WeightField::ActiveV4).unwrap();
        assert!(!got.is_empty());
        assert!(got.iter().all(|c| c.actors.len() >= 2), "largest actor holds only 33%");
    }

    #[test]
    fn too_many_actors_errors() {
        let list: Vec<ActorAllocation> = (0..21)
            .map(|i| ActorAllocation {
                actor: format!("a{i}"),
                active_v4: 1,
                allocated_v4: 1,
                allocated_v6_slash32: 1,
            })
            .collect();
        assert!(matches!(
            minimal_coalitions(&list, WeightField::ActiveV4).unwrap_err(),
            AllocError::InputTooLarge { actors: 21, max: 20 }
        ));
    }

    #[test]
    fn zero_weight_members_never_appear_in_minimal_coalitions() {
        let list = actors(&[("a", 60), ("zero", 0), ("b", 40)]);
        let got = minimal_coalitions(&list, WeightField::ActiveV4).unwrap();
        assert_eq!(got.len(), 1);
        assert_eq!(got[0].actors, vec!["a"]);
    }

    #[test]
    fn csv_parses_and_validates() {
        let text = "actor,active_v4,allocated_v4,allocated_v6_slash32\n# comment\nAFRINIC,15,121,9661\n";
        let rows = parse_allocations_csv(text).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].actor, "AFRINIC");
        assert_eq!(rows[0].allocated_v6_slash32, 9661);

        let err = parse_allocations_csv("actor,active_v4,allocated_v4,allocated_v6_slash32\nX,5,3,1\n").unwrap_err();
        assert_eq!(err.line, 2, "active exceeding allocated is rejected with its line");

        let err = parse_allocations_csv("a,b\n").unwrap_err();
        assert_eq!(err.line, 1);
    }

    #[test]
    fn duplicate_actor_rejected() {
        let list = actors(&[("a", 1), ("a", 2)]);
        assert!(matches!(
            secede(&list, &removed(&[]), WeightField::ActiveV4).unwrap_err(),
            AllocError::DuplicateActor(_)
        ));
    }
}
