//! Pass/fail/inconclusive reports with deterministic witness lists.

use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::Pass => write!(f, "pass"),
            Status::Fail => write!(f, "fail"),
            Status::Inconclusive => write!(f, "inconclusive"),
        }
    }
}

/// Outcome of a bounded-depth check.
///
/// A failing report carries at least one witness; witnesses are rendered
/// human-readably and sorted before reporting so output is deterministic.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub depth: Option<u64>,
    pub witnesses: Vec<String>,
    pub stats: BTreeMap<String, u64>,
}

impl Report {
    pub fn new(status: Status) -> Self {
        Report {
            status,
            depth: None,
            witnesses: Vec::new(),
            stats: BTreeMap::new(),
        }
    }

    pub fn pass() -> Self {
        Report::new(Status::Pass)
    }

    pub fn fail(witness: impl Into<String>) -> Self {
        let mut r = Report::new(Status::Fail);
        r.witnesses.push(witness.into());
        r
    }

    pub fn with_depth(mut self, depth: u64) -> Self {
        self.depth = Some(depth);
        self
    }

    pub fn record(&mut self, key: &str, n: u64) {
        *self.stats.entry(key.to_string()).or_insert(0) += n;
    }

    pub fn add_witness(&mut self, w: impl Into<String>) {
        self.status = Status::Fail;
        self.witnesses.push(w.into());
    }

    /// Downgrade a passing report to inconclusive (never upgrades a failure).
    pub fn mark_inconclusive(&mut self) {
        if self.status == Status::Pass {
            self.status = Status::Inconclusive;
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// Canonical sort of the witness list; call once all checks have run.
    pub fn finish(mut self) -> Self {
        self.witnesses.sort();
        self.witnesses.dedup();
        self
    }

    /// Deterministic text rendering used by the CLI.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("status: {}\n", self.status));
        if let Some(d) = self.depth {
            out.push_str(&format!("depth: {}\n", d));
        }
        for (k, v) in &self.stats {
            out.push_str(&format!("checked {}: {}\n", k, v));
        }
        for w in &self.witnesses {
            out.push_str(&format!("witness: {}\n", w));
        }
        out
    }
}
