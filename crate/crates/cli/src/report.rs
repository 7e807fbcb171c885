use std::path::Path;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

pub const EXIT_OK: u8 = 0;
pub const EXIT_NEGATIVE: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_CAP: u8 = 3;

/// Machine-readable record of one invocation.
#[derive(Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    pub tool_version: String,
    pub args: Vec<String>,
    pub seed: u64,
    /// SHA-256 over the input files, in argument order.
    pub inputs_digest: String,
    pub verdict: String,
    pub result: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    pub elapsed_ms: f64,
}

/// What a command produced: the report, an exit code, and optionally a
/// primary result that goes to stdout instead of the report.
pub struct Outcome {
    pub verdict: String,
    pub exit: u8,
    pub result: Value,
    pub witness: Option<Value>,
    pub primary: Option<String>,
    pub summary: String,
}

impl Outcome {
    pub fn new(verdict: impl Into<String>, exit: u8, result: impl Serialize) -> Self {
        Outcome {
            verdict: verdict.into(),
            exit,
            result: serde_json::to_value(result).expect("results serialize"),
            witness: None,
            primary: None,
            summary: String::new(),
        }
    }

    pub fn witness(mut self, w: impl Serialize) -> Self {
        self.witness = Some(serde_json::to_value(w).expect("witnesses serialize"));
        self
    }

    pub fn primary(mut self, text: String) -> Self {
        self.primary = Some(text);
        self
    }

    pub fn summary(mut self, text: impl Into<String>) -> Self {
        self.summary = text.into();
        self
    }
}

#[derive(Debug)]
pub enum CliError {
    /// Unreadable or malformed input, or arguments out of range.
    Input(anyhow::Error),
    /// A search or enumeration cap was hit, or construction failed.
    Cap(anyhow::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Cap(_) => EXIT_CAP,
        }
    }

    pub fn message(&self) -> String {
        match self {
            CliError::Input(e) | CliError::Cap(e) => format!("{e:#}"),
        }
    }
}

pub fn input(e: impl Into<anyhow::Error>) -> CliError {
    CliError::Input(e.into())
}

pub fn cap(e: impl Into<anyhow::Error>) -> CliError {
    CliError::Cap(e.into())
}

/// Reads input files, keeping a running digest of their bytes.
#[derive(Default)]
pub struct Inputs {
    hasher: Sha256,
}

impl Inputs {
    pub fn read(&mut self, path: &Path) -> Result<String, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| input(anyhow::anyhow!("cannot read {}: {e}", path.display())))?;
        self.hasher.update(path.display().to_string().as_bytes());
        self.hasher.update([0]);
        self.hasher.update(text.as_bytes());
        Ok(text)
    }

    pub fn json<T: serde::de::DeserializeOwned>(&mut self, path: &Path) -> Result<T, CliError> {
        let text = self.read(path)?;
        serde_json::from_str(&text).map_err(|e| input(anyhow::anyhow!("{}: {e}", path.display())))
    }

    pub fn digest(self) -> String {
        format!("{:x}", self.hasher.finalize())
    }
}
