//! Active-address tracking with adaptive probing.
//!
//! For each monitored block an [`ActiveSetEstimate`] holds the set of
//! addresses ever seen responsive (`historically_active`, fixed per run) and
//! the subset currently believed responsive (`believed_active`). A ring
//! cursor walks the historical set so probing effort spreads evenly across
//! addresses instead of hammering the front of the list.
//!
//! Each round the estimator plans up to `max_probes` addresses starting at
//! the cursor and probes adaptively:
//!
//! - the first positive answer settles the round as [`RoundVerdict::Reachable`];
//! - a negative answer for an address *currently believed active* removes it,
//!   and `negative_confirmations` such removals in one round settle the round
//!   as [`RoundVerdict::Unreachable`] (negatives for addresses already
//!   believed inactive carry no new information and do not count);
//! - running out of planned probes leaves the round
//!   [`RoundVerdict::Undetermined`].
//!
//! When nothing is believed active the estimator keeps watch with
//! [`PROBES_WHEN_DOWN`] probes per round; a block coming back is therefore
//! rediscovered two addresses in the first round and one per round after
//! that as the cursor sweeps on ([`recovery_trace`] gives the closed form).
//!
//! With `exhaustive_confirmation` enabled, unreachability is declared only
//! after every historical address has been probed without an answer — the
//! estimator counts consecutive negatives across rounds and compares against
//! the historical set size.

use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

/// Probes sent per round while nothing is believed active.
pub const PROBES_WHEN_DOWN: usize = 2;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EstimatorError {
    #[error("historical address list is empty")]
    NoHistory,
    #[error("address {0:?} is not in the historical set")]
    UnknownAddress(String),
}

/// Per-round probing limits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbeBudget {
    /// Probes always sent, even when the first answers settle the round.
    pub min_probes: usize,
    /// Hard cap on probes per round.
    pub max_probes: usize,
    /// Removals of believed-active addresses that settle a round as
    /// unreachable.
    pub negative_confirmations: usize,
}

impl Default for ProbeBudget {
    fn default() -> Self {
        ProbeBudget { min_probes: 1, max_probes: 15, negative_confirmations: 4 }
    }
}

/// A single probe's result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProbeReply {
    Positive,
    Negative,
}

/// Outcome of one measurement round.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RoundVerdict {
    Reachable,
    Unreachable,
    Undetermined,
}

impl fmt::Display for RoundVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// One round's probes and verdict, as returned by
/// [`ActiveSetEstimate::run_round`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundReport {
    pub verdict: RoundVerdict,
    pub probes: Vec<(String, ProbeReply)>,
    /// Believed-active addresses removed this round.
    pub removals: usize,
}

/// Serializable snapshot of estimator state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateSnapshot {
    pub historically_active: Vec<String>,
    pub believed_active: Vec<String>,
    pub cursor: usize,
    pub consecutive_negatives: usize,
    pub exhaustive_confirmation: bool,
    pub density: f64,
}

/// Belief state for one block's addresses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActiveSetEstimate {
    history: Vec<String>,
    believed: BTreeSet<String>,
    cursor: usize,
    consecutive_negatives: usize,
    exhaustive_confirmation: bool,
}

impl ActiveSetEstimate {
    /// Start from a historical address list, believing everything active.
    /// Duplicates are dropped, keeping first-occurrence order.
    pub fn new(history: Vec<String>) -> Result<Self, EstimatorError> {
        let mut seen = BTreeSet::new();
        let history: Vec<String> = history.into_iter().filter(|a| seen.insert(a.clone())).collect();
        if history.is_empty() {
            return Err(EstimatorError::NoHistory);
        }
        let believed = history.iter().cloned().collect();
        Ok(ActiveSetEstimate {
            history,
            believed,
            cursor: 0,
            consecutive_negatives: 0,
            exhaustive_confirmation: false,
        })
    }

    /// Start with an explicit believed-active subset (may be empty).
    pub fn with_currently_active(
        history: Vec<String>,
        current: Vec<String>,
    ) -> Result<Self, EstimatorError> {
        let mut est = Self::new(history)?;
        let mut believed = BTreeSet::new();
        for addr in current {
            if !est.history.iter().any(|h| *h == addr) {
                return Err(EstimatorError::UnknownAddress(addr));
            }
            believed.insert(addr);
        }
        est.believed = believed;
        Ok(est)
    }

    /// Require a full negative sweep of the historical set before any
    /// unreachable verdict.
    pub fn with_exhaustive_confirmation(mut self, on: bool) -> Self {
        self.exhaustive_confirmation = on;
        self
    }

    pub fn historically_active(&self) -> &[String] {
        &self.history
    }

    pub fn believed_active(&self) -> &BTreeSet<String> {
        &self.believed
    }

    pub fn believed_active_count(&self) -> usize {
        self.believed.len()
    }

    /// Believed-active share of the historical set.
    pub fn density(&self) -> f64 {
        self.believed.len() as f64 / self.history.len() as f64
    }

    pub fn cursor(&self) -> usize {
        self.cursor
    }

    pub fn consecutive_negatives(&self) -> usize {
        self.consecutive_negatives
    }

    pub fn snapshot(&self) -> EstimateSnapshot {
        EstimateSnapshot {
            historically_active: self.history.clone(),
            believed_active: self.believed.iter().cloned().collect(),
            cursor: self.cursor,
            consecutive_negatives: self.consecutive_negatives,
            exhaustive_confirmation: self.exhaustive_confirmation,
            density: self.density(),
        }
    }

    /// Addresses the next round may probe, in order: up to
    /// `budget.max_probes` ring positions starting at the cursor, never
    /// repeating an address.
    pub fn plan(&self, budget: &ProbeBudget) -> Vec<String> {
        let n = self.history.len().min(budget.max_probes.max(budget.min_probes));
        (0..n)
            .map(|i| self.history[(self.cursor + i) % self.history.len()].clone())
            .collect()
    }

    /// Fold one round of probe results into the belief state and judge the
    /// round. The cursor advances past every probed address, answered or
    /// not, so successive rounds keep sweeping the ring.
    pub fn apply_round(
        &mut self,
        budget: &ProbeBudget,
        results: &[(String, ProbeReply)],
    ) -> Result<RoundReport, EstimatorError> {
        let mut removals = 0usize;
        let mut any_positive = false;
        for (addr, reply) in results {
            if !self.history.iter().any(|h| h == addr) {
                return Err(EstimatorError::UnknownAddress(addr.clone()));
            }
            match reply {
                ProbeReply::Positive => {
                    any_positive = true;
                    self.believed.insert(addr.clone());
                }
                ProbeReply::Negative => {
                    if self.believed.remove(addr) {
                        removals += 1;
                    }
                }
            }
        }
        self.cursor = (self.cursor + results.len()) % self.history.len();
        if any_positive {
            self.consecutive_negatives = 0;
        } else {
            self.consecutive_negatives += results.len();
        }
        let verdict = if any_positive {
            RoundVerdict::Reachable
        } else if self.exhaustive_confirmation {
            if self.consecutive_negatives >= self.history.len() {
                RoundVerdict::Unreachable
            } else {
                RoundVerdict::Undetermined
            }
        } else if removals >= budget.negative_confirmations || self.believed.is_empty() {
            RoundVerdict::Unreachable
        } else {
            RoundVerdict::Undetermined
        };
        Ok(RoundReport { verdict, probes: results.to_vec(), removals })
    }

    /// Run one adaptive round, probing through `driver`.
    ///
    /// Probes follow [`plan`](Self::plan) order and stop early once the
    /// round is settled: at the first positive answer, or at
    /// `negative_confirmations` removals (unless exhaustive confirmation is
    /// on, which always sweeps the full plan). While nothing is believed
    /// active the round sends only [`PROBES_WHEN_DOWN`] probes, and a
    /// positive answer no longer stops it — both watch probes are spent, so
    /// a recovering block comes back with two believed addresses at once.
    pub fn run_round(
        &mut self,
        budget: &ProbeBudget,
        mut driver: impl FnMut(&str) -> ProbeReply,
    ) -> Result<RoundReport, EstimatorError> {
        let mut plan = self.plan(budget);
        let was_down = self.believed.is_empty();
        if was_down && !self.exhaustive_confirmation {
            plan.truncate(PROBES_WHEN_DOWN.max(budget.min_probes));
        }
        let mut results = Vec::new();
        let mut removals = 0usize;
        for addr in plan {
            let reply = driver(&addr);
            let is_removal =
                reply == ProbeReply::Negative && self.believed.contains(addr.as_str());
            results.push((addr, reply));
            if is_removal {
                removals += 1;
            }
            if results.len() < budget.min_probes || was_down {
                continue;
            }
            if reply == ProbeReply::Positive {
                break;
            }
            if !self.exhaustive_confirmation && removals >= budget.negative_confirmations {
                break;
            }
        }
        self.apply_round(budget, &results)
    }
}

/// Believed-active count after each round while `n` responsive addresses
/// are rediscovered from an all-down belief state: the first round's watch
/// probes find `probes_first_round` addresses (normally
/// [`PROBES_WHEN_DOWN`]), then the first positive settles each later round,
/// adding one address as the cursor sweeps. The trace ends when the count
/// reaches `n`, so its length is the number of rounds a full recovery
/// takes: `n - 1` rounds for `n >= 2`, one round for `n = 1`.
pub fn recovery_trace(n: usize, budget: &ProbeBudget, probes_first_round: usize) -> Vec<usize> {
    if n == 0 {
        return Vec::new();
    }
    let first = probes_first_round.max(1).min(budget.max_probes).min(n);
    let mut trace = vec![first];
    let mut count = first;
    while count < n {
        count += 1;
        trace.push(count);
    }
    trace
}
