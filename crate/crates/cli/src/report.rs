use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::args::Format;

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: &'static str,
    /// SHA-256 over the input files and effective parameters.
    pub inputs_digest: String,
    pub outcome: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
}

/// Accumulates the inputs of a command into a digest.
#[derive(Debug, Clone, Default)]
pub struct InputDigest(Sha256);

impl InputDigest {
    pub fn new(command: &str) -> Self {
        let mut d = Self(Sha256::new());
        d.add(command.as_bytes());
        d
    }

    /// Length-prefixed so that adjacent inputs cannot run together.
    pub fn add(&mut self, bytes: &[u8]) {
        self.0.update((bytes.len() as u64).to_le_bytes());
        self.0.update(bytes);
    }

    pub fn add_json<T: Serialize>(&mut self, value: &T) {
        let bytes = serde_json::to_vec(value).expect("parameters serialize");
        self.add(&bytes);
    }

    pub fn finish(self) -> String {
        hex::encode(self.0.finalize())
    }
}

pub fn render<T: Serialize>(value: &T, format: Format) -> String {
    let value = serde_json::to_value(value).expect("report serializes");
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&value).expect("value serializes");
            s.push('\n');
            s
        }
        Format::Text => {
            let mut lines = Vec::new();
            flatten("", &value, &mut lines);
            let mut s = lines.join("\n");
            s.push('\n');
            s
        }
    }
}

fn flatten(prefix: &str, value: &Value, out: &mut Vec<String>) {
    let join = |key: &str| {
        if prefix.is_empty() {
            key.to_string()
        } else {
            format!("{prefix}.{key}")
        }
    };
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                flatten(&join(k), v, out);
            }
        }
        Value::Array(items) if items.iter().any(|v| v.is_object()) => {
            for (i, v) in items.iter().enumerate() {
                flatten(&join(&i.to_string()), v, out);
            }
        }
        other => out.push(format!("{prefix} = {other}")),
    }
}
