//! Bundled reference scenarios.
//!
//! Three fixed, seeded worlds used by the test suite and handy as CLI
//! demos. Their shapes are chosen so the analysis layer's behavior is
//! exactly predictable:
//!
//! - `island_2017_06_03` — one hosted block cut off for six rounds. Full
//!   address availability, so external estimators decay to zero in three
//!   rounds (four removals, four removals, then the last two) and recover
//!   one address per round after the two-probe rediscovery.
//! - `peninsula_2017_10_23` — one hostless block reachable only from
//!   `vp-w` for sixteen rounds. The block's 78 addresses carry a fixed
//!   44%-responsive set, and the event starts at round 48, after the worst
//!   case first ring sweep (45 rounds) has certainly finished, so the
//!   reaching vantage point's believed count sits exactly at 34 before and
//!   through the event.
//! - `dnsmon_2022_07_23` — a synthetic day of DNS queries: 10,000 vantage
//!   points across both families with planted island and peninsula
//!   populations sized so the all/minus-islands/clean loss columns land
//!   near 1%/0.5%/0.2% (v4) and 6%/1%/0.6% (v6), and the per-family
//!   sensitivity ratios near 5 and 9.7.

use super::{
    BlockConfig, DnsConfig, DnsPopulation, EventKind, PlantedEvent, ProbingConfig, ScenarioConfig,
    ScenarioError,
};
use crate::dnsmon::Family;

/// Vantage-point names shared by the probing scenarios.
fn probing_vps() -> Vec<String> {
    ["vp-c", "vp-e", "vp-g", "vp-j", "vp-n", "vp-w"]
        .into_iter()
        .map(String::from)
        .collect()
}

/// A hosted /24 goes island for rounds 4..10 of 24.
pub fn island_2017_06_03() -> ScenarioConfig {
    ScenarioConfig {
        name: "island_2017_06_03".into(),
        seed: 20170603,
        probing: Some(ProbingConfig {
            vps: probing_vps(),
            blocks: vec![BlockConfig {
                name: "417bca00/24".into(),
                addresses: 13,
                external_addresses: 10,
                host_vp: Some("vp-e".into()),
                availability: 1.0,
            }],
            rounds: 24,
            round_seconds: 660,
            events: vec![PlantedEvent {
                kind: EventKind::Island,
                block: "417bca00/24".into(),
                start_round: 4,
                end_round: 10,
                reaching_vps: vec![],
            }],
        }),
        dns: None,
    }
}

/// A hostless /24 is reachable only from `vp-w` for rounds 48..64 of 80.
pub fn peninsula_2017_10_23() -> ScenarioConfig {
    ScenarioConfig {
        name: "peninsula_2017_10_23".into(),
        seed: 20171023,
        probing: Some(ProbingConfig {
            vps: probing_vps(),
            blocks: vec![BlockConfig {
                name: "50f5b000/24".into(),
                addresses: 78,
                external_addresses: 78,
                host_vp: None,
                availability: 0.44,
            }],
            rounds: 80,
            round_seconds: 660,
            events: vec![PlantedEvent {
                kind: EventKind::Peninsula,
                block: "50f5b000/24".into(),
                start_round: 48,
                end_round: 64,
                reaching_vps: vec!["vp-w".into()],
            }],
        }),
        dns: None,
    }
}

/// One synthetic day of DNS queries over 13 targets, hourly per vantage
/// point: 6,000 v4 vantage points (30 islands, 234 peninsulas spread
/// round-robin) and 4,000 v6 (200 islands, 190 peninsulas all failing the
/// disputed target 3).
pub fn dnsmon_2022_07_23() -> ScenarioConfig {
    ScenarioConfig {
        name: "dnsmon_2022_07_23".into(),
        seed: 20220723,
        probing: None,
        dns: Some(DnsConfig {
            window_start: 1_658_534_400,
            queries_per_target: 24,
            populations: vec![
                DnsPopulation {
                    family: Family::V4,
                    vps: 6_000,
                    island_vps: 30,
                    peninsula_vps: 234,
                    disputed_target: None,
                    baseline_loss: 0.002,
                },
                DnsPopulation {
                    family: Family::V6,
                    vps: 4_000,
                    island_vps: 200,
                    peninsula_vps: 190,
                    disputed_target: Some(3),
                    baseline_loss: 0.00615,
                },
            ],
        }),
    }
}

/// Names of all bundled scenarios.
pub const BUNDLED: [&str; 3] = ["island_2017_06_03", "peninsula_2017_10_23", "dnsmon_2022_07_23"];

/// Look up a bundled scenario by name.
pub fn by_name(name: &str) -> Result<ScenarioConfig, ScenarioError> {
    match name {
        "island_2017_06_03" => Ok(island_2017_06_03()),
        "peninsula_2017_10_23" => Ok(peninsula_2017_10_23()),
        "dnsmon_2022_07_23" => Ok(dnsmon_2022_07_23()),
        other => Err(ScenarioError::UnknownScenario(other.to_string())),
    }
}
