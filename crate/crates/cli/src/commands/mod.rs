//! Shared command plumbing: failure classification, input reading with
//! hashing, and the outcome bundle every handler returns.

pub mod graph;
pub mod report;
pub mod sim;
pub mod streams;

use crate::manifest::{sha256_hex, InputRecord};
use std::path::{Path, PathBuf};

/// Why a command could not finish. Input failures are the user's data or
/// flags (exit 2, with a diagnostic naming the offending file); internal
/// failures are ours (exit 1).
#[derive(Debug)]
pub enum Failure {
    Input(String),
    Internal(anyhow::Error),
}

impl Failure {
    pub fn input(msg: impl Into<String>) -> Self {
        Failure::Input(msg.into())
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Internal(e)
    }
}

/// Settings shared by every subcommand.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone)]
pub struct Ctx {
    pub out_dir: PathBuf,
    pub format: OutputFormat,
    pub seed: Option<u64>,
}

/// Everything a handler produced: canonical argv for the manifest, hashed
/// inputs, output files (basename, bytes), and summary lines for stdout.
pub struct Outcome {
    pub argv: Vec<String>,
    pub seed: Option<u64>,
    pub inputs: Vec<InputRecord>,
    pub outputs: Vec<(String, Vec<u8>)>,
    pub stdout: Vec<String>,
}

impl Outcome {
    pub fn new(argv: Vec<String>) -> Self {
        Outcome { argv, seed: None, inputs: Vec::new(), outputs: Vec::new(), stdout: Vec::new() }
    }

    pub fn push_json(&mut self, name: &str, value: &impl serde::Serialize) -> Result<(), Failure> {
        let mut bytes = serde_json::to_vec_pretty(value)
            .map_err(|e| Failure::Internal(anyhow::anyhow!("serializing {name}: {e}")))?;
        bytes.push(b'\n');
        self.outputs.push((name.to_string(), bytes));
        Ok(())
    }

    pub fn push_text(&mut self, name: &str, text: String) {
        self.outputs.push((name.to_string(), text.into_bytes()));
    }
}

pub fn path_str(path: &Path) -> String {
    path.display().to_string()
}

/// Read an input file, recording its hash for the manifest. A missing or
/// unreadable file is the user's problem, reported with the path.
pub fn read_input(path: &Path, outcome: &mut Outcome) -> Result<String, Failure> {
    let bytes = std::fs::read(path)
        .map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))?;
    let text = String::from_utf8(bytes)
        .map_err(|_| Failure::input(format!("{}: not valid UTF-8", path.display())))?;
    outcome
        .inputs
        .push(InputRecord { path: path_str(path), sha256: sha256_hex(text.as_bytes()) });
    Ok(text)
}

/// Wrap a line-numbered parse error with its file name.
pub fn parse_failure(path: &Path, e: corelens::ParseError) -> Failure {
    Failure::input(format!("{}:{}: {}", path.display(), e.line, e.message))
}

/// Wrap any displayable domain error with the file it came from.
pub fn input_failure(path: &Path, e: impl std::fmt::Display) -> Failure {
    Failure::input(format!("{}: {e}", path.display()))
}
