use std::collections::BTreeMap;
use std::fmt::Write as _;

use ruth_core::report::Check;
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CheckEntry {
    pub name: String,
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl From<&Check> for CheckEntry {
    fn from(c: &Check) -> Self {
        CheckEntry {
            name: c.name.clone(),
            status: if c.ok() { "ok" } else { "fail" },
            witness: c.witness.as_ref().map(ToString::to_string),
        }
    }
}

/// Fields serialize in declaration order and tables are keyed by a
/// `BTreeMap`, so equal inputs give byte-identical output.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub input_sha256: String,
    pub ok: bool,
    pub checks: Vec<CheckEntry>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub tables: BTreeMap<String, Value>,
}

impl Report {
    pub fn new(command: &str, input: &[u8]) -> Self {
        Report {
            command: command.into(),
            input_sha256: hex::encode(Sha256::digest(input)),
            ok: true,
            checks: Vec::new(),
            tables: BTreeMap::new(),
        }
    }

    pub fn push(&mut self, c: &Check) {
        self.ok &= c.ok();
        self.checks.push(c.into());
    }

    pub fn extend<'a>(&mut self, checks: impl IntoIterator<Item = &'a Check>) {
        for c in checks {
            self.push(c);
        }
    }

    pub fn prefixed<'a>(&mut self, prefix: &str, checks: impl IntoIterator<Item = &'a Check>) {
        for c in checks {
            let mut c = c.clone();
            c.name = format!("{prefix}{}", c.name);
            self.push(&c);
        }
    }

    pub fn table(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).expect("tables serialize");
        self.tables.insert(key.into(), v);
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} ({})", self.command, &self.input_sha256[..12]);
        for c in &self.checks {
            match &c.witness {
                None => {
                    let _ = writeln!(out, "  ok    {}", c.name);
                }
                Some(w) => {
                    let _ = writeln!(out, "  FAIL  {}: {w}", c.name);
                }
            }
        }
        for (k, v) in &self.tables {
            match v {
                Value::Array(items) if items.iter().all(Value::is_string) => {
                    let _ = writeln!(out, "{k}:");
                    for s in items {
                        let _ = writeln!(out, "  {}", s.as_str().unwrap_or_default());
                    }
                }
                other => {
                    let _ = writeln!(out, "{k}: {other}");
                }
            }
        }
        let _ = writeln!(out, "{}", if self.ok { "all checks ok" } else { "some checks failed" });
        out
    }
}
