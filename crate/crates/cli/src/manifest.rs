//! Run manifests: every command records what it read, what it wrote, and
//! the exact arguments, so any run can be reproduced byte-for-byte later.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const MANIFEST_NAME: &str = "manifest.json";

/// One input file as the command saw it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputRecord {
    pub path: String,
    pub sha256: String,
}

/// Record of one command invocation, written next to its outputs.
///
/// `argv` is the canonical argument list starting at the subcommand name and
/// excluding `--out-dir`, so re-running it against a different directory
/// must reproduce the same output bytes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub argv: Vec<String>,
    pub seed: Option<u64>,
    pub version: String,
    pub inputs: Vec<InputRecord>,
    pub config_hash: String,
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn new(argv: Vec<String>, seed: Option<u64>, inputs: Vec<InputRecord>, outputs: Vec<String>) -> Self {
        let command = argv.first().cloned().unwrap_or_default();
        let config_hash = config_hash(&argv, &inputs);
        RunManifest {
            command,
            argv,
            seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
            inputs,
            config_hash,
            outputs,
        }
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let digest = hasher.finalize();
    let mut out = String::with_capacity(64);
    for b in digest {
        out.push_str(&format!("{b:02x}"));
    }
    out
}

/// Identity of a run's configuration: the canonical argv plus every input's
/// content hash.
fn config_hash(argv: &[String], inputs: &[InputRecord]) -> String {
    let mut hasher = Sha256::new();
    for arg in argv {
        hasher.update(arg.as_bytes());
        hasher.update([0x1f]);
    }
    for input in inputs {
        hasher.update(input.path.as_bytes());
        hasher.update([0x1e]);
        hasher.update(input.sha256.as_bytes());
        hasher.update([0x1e]);
    }
    let digest = hasher.finalize();
    let mut out = String::with_capacity(64);
    for b in digest {
        out.push_str(&format!("{b:02x}"));
    }
    out
}
