//! Provenance record embedded in every CLI artifact.

use std::path::Path;

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::search::TOOL_VERSION;

#[derive(Clone, Debug, Default)]
pub struct RunManifest {
    pub subcommand: String,
    /// Flags as given, minus the thread count (results never depend on it).
    pub flags: Map<String, Value>,
    /// `(path, sha256 hex)` for each input file.
    pub inputs: Vec<(String, String)>,
    pub wall_clock_ms: u64,
    pub exit_status: i32,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

impl RunManifest {
    pub fn new(subcommand: impl Into<String>) -> Self {
        RunManifest {
            subcommand: subcommand.into(),
            ..Default::default()
        }
    }

    pub fn flag(&mut self, name: &str, value: impl Into<Value>) {
        self.flags.insert(name.to_string(), value.into());
    }

    pub fn input(&mut self, path: &Path, bytes: &[u8]) {
        self.inputs.push((path.display().to_string(), sha256_hex(bytes)));
    }

    pub fn to_json(&self) -> Value {
        json!({
            "subcommand": self.subcommand,
            "flags": self.flags,
            "inputs": self.inputs.iter().map(|(p, d)| json!({"path": p, "sha256": d})).collect::<Vec<_>>(),
            "tool_version": TOOL_VERSION,
            "wall_clock_ms": self.wall_clock_ms,
            "exit_status": self.exit_status,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_of_empty_input() {
        assert_eq!(sha256_hex(b""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    }
}
