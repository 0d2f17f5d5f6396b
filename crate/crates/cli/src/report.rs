//! The report every subcommand produces.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

/// Fields are declared in key order and nested objects are plain JSON
/// values with sorted keys, so the output is canonical: re-serializing a
/// parsed report, typed or untyped, gives the same bytes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub command: String,
    pub exit_code: i32,
    /// sha256 over every input the command read, in reading order.
    pub inputs_digest: String,
    pub ok: bool,
    /// Wall time in microseconds, only with `--timing`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_us: Option<u64>,
    pub verdicts: Value,
    pub witnesses: Vec<Value>,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Length-prefixed sha256 over labelled inputs.
#[derive(Clone, Default)]
pub struct InputDigest(Sha256);

impl InputDigest {
    pub fn new(command: &str) -> Self {
        let mut d = InputDigest(Sha256::new());
        d.add("command", command.as_bytes());
        d
    }

    pub fn add(&mut self, label: &str, bytes: &[u8]) {
        for part in [label.as_bytes(), bytes] {
            self.0.update((part.len() as u64).to_le_bytes());
            self.0.update(part);
        }
    }

    pub fn hex(&self) -> String {
        hex::encode(self.0.clone().finalize())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_separates_fields() {
        let mut a = InputDigest::new("verify");
        a.add("ab", b"c");
        let mut b = InputDigest::new("verify");
        b.add("a", b"bc");
        assert_ne!(a.hex(), b.hex());
        assert_eq!(a.hex().len(), 64);
    }

    #[test]
    fn report_round_trips() {
        let r = Report {
            command: "verify".into(),
            inputs_digest: "00".into(),
            ok: false,
            exit_code: 1,
            verdicts: serde_json::json!({"verified": false, "axioms": [{"axiom": "kq+sp=1", "holds": false}]}),
            witnesses: vec![serde_json::json!({"elements": ["d"]})],
            timing_us: None,
        };
        let text = r.to_json();
        let back: Report = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_json(), text);
    }
}
