//! Check records and the versioned JSON report.

use std::collections::BTreeMap;
use std::fmt;
use std::time::{Duration, SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::Value;

pub const SCHEMA_VERSION: &str = "1.0.0";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Status {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
    #[serde(rename = "PAPER-TRUSTED")]
    PaperTrusted,
    #[serde(rename = "SKIPPED")]
    Skipped,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::PaperTrusted => "PAPER-TRUSTED",
            Status::Skipped => "SKIPPED",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub id: String,
    pub anchor: String,
    pub summary: String,
    pub status: Status,
    pub witness: Value,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Summary {
    pub total: usize,
    pub pass: usize,
    pub fail: usize,
    pub paper_trusted: usize,
    pub skipped: usize,
}

/// Non-deterministic data, kept apart so the rest of the report is reproducible.
#[derive(Clone, Debug, Serialize)]
pub struct Header {
    pub unix_time: u64,
    pub timings_ms: BTreeMap<String, f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema_version: &'static str,
    pub header: Header,
    pub command: String,
    pub config: Value,
    pub checks: Vec<Check>,
    pub summary: Summary,
}

impl Report {
    pub fn new(command: &str, config: Value, timed: Vec<(Check, Duration)>) -> Self {
        let mut timings_ms = BTreeMap::new();
        let mut checks = Vec::with_capacity(timed.len());
        for (c, t) in timed {
            timings_ms.insert(c.id.clone(), t.as_secs_f64() * 1e3);
            checks.push(c);
        }
        let mut summary = Summary { total: checks.len(), ..Summary::default() };
        for c in &checks {
            match c.status {
                Status::Pass => summary.pass += 1,
                Status::Fail => summary.fail += 1,
                Status::PaperTrusted => summary.paper_trusted += 1,
                Status::Skipped => summary.skipped += 1,
            }
        }
        let unix_time = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
        Report {
            schema_version: SCHEMA_VERSION,
            header: Header { unix_time, timings_ms },
            command: command.to_string(),
            config,
            checks,
            summary,
        }
    }

    pub fn has_failures(&self) -> bool {
        self.summary.fail > 0
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let ms = self.header.timings_ms.get(&c.id).copied().unwrap_or(0.0);
            out.push_str(&format!("{:<14} {:<32} {:>9.1} ms  {}\n", c.status, c.id, ms, c.summary));
        }
        let s = &self.summary;
        out.push_str(&format!(
            "{} checks: {} PASS, {} FAIL, {} PAPER-TRUSTED, {} SKIPPED\n",
            s.total, s.pass, s.fail, s.paper_trusted, s.skipped
        ));
        out
    }
}
