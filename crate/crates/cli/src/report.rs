use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

/// What a run reports. Everything except `timing` is a function of the
/// command line and the input bytes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub command: Vec<String>,
    /// Input path to SHA-256 of its bytes.
    pub inputs: BTreeMap<String, String>,
    pub headline: bool,
    pub verdicts: Vec<VerdictLine>,
    pub witnesses: Vec<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<Value>,
    pub timing: Timing,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictLine {
    pub check: String,
    pub value: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub millis: f64,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        if self.headline {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "$ {}", self.command.join(" "));
        for (path, digest) in &self.inputs {
            let _ = writeln!(out, "input {path} sha256:{digest}");
        }
        for v in &self.verdicts {
            let _ = write!(out, "{}: {}", v.check, v.value);
            if let Some(note) = &v.note {
                let _ = write!(out, " ({note})");
            }
            out.push('\n');
        }
        for w in &self.witnesses {
            let _ = writeln!(out, "witness: {w}");
        }
        if let Some(o) = &self.output {
            let _ = writeln!(out, "output: {}", serde_json::to_string_pretty(o).expect("value"));
        }
        let _ = writeln!(out, "result: {}", self.headline);
        let _ = writeln!(out, "{} {} in {:.1} ms", self.tool, self.version, self.timing.millis);
        out
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// The result of a subcommand before it is wrapped into a [`Report`].
#[derive(Debug, Default)]
pub struct Findings {
    pub verdicts: Vec<VerdictLine>,
    pub witnesses: Vec<Value>,
    pub output: Option<Value>,
    pub headline: Option<bool>,
}

impl Findings {
    pub fn verdict(&mut self, check: impl Into<String>, value: bool) -> &mut Self {
        self.verdicts.push(VerdictLine {
            check: check.into(),
            value,
            note: None,
        });
        self
    }

    pub fn verdict_noted(&mut self, check: impl Into<String>, value: bool, note: impl Into<String>) -> &mut Self {
        self.verdicts.push(VerdictLine {
            check: check.into(),
            value,
            note: Some(note.into()),
        });
        self
    }

    pub fn witness<T: Serialize>(&mut self, w: &T) -> &mut Self {
        self.witnesses.push(serde_json::to_value(w).expect("witness serializes"));
        self
    }

    pub fn output<T: Serialize>(&mut self, o: &T) -> &mut Self {
        self.output = Some(serde_json::to_value(o).expect("output serializes"));
        self
    }

    /// The explicit headline, or else the first verdict.
    pub fn headline(&self) -> bool {
        self.headline
            .or_else(|| self.verdicts.first().map(|v| v.value))
            .unwrap_or(true)
    }
}
