//! Versioned run reports with JSON and CSV forms.

use crate::CliError;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::collections::BTreeMap;

pub const SCHEMA: &str = "ldspec/1";
pub const CSV_HEADER: [&str; 6] = ["check", "status", "measured", "expected", "tol", "ref"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Inconclusive on at least one side; not counted as a failure.
    Skip,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skip => "skip",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "pass" => Some(Status::Pass),
            "fail" => Some(Status::Fail),
            "skip" => Some(Status::Skip),
            _ => None,
        }
    }
}

/// One executable check. Passing means `|measured − expected| ≤ tol`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub check: String,
    pub status: Status,
    pub measured: Option<f64>,
    pub expected: Option<f64>,
    pub tol: Option<f64>,
    #[serde(rename = "ref")]
    pub reference: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seconds: Option<f64>,
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

impl Check {
    pub fn compare(
        name: impl Into<String>,
        measured: f64,
        expected: f64,
        tol: f64,
        reference: &str,
    ) -> Self {
        let ok = (measured - expected).abs() <= tol;
        Self {
            check: name.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            measured: finite(measured),
            expected: finite(expected),
            tol: finite(tol),
            reference: reference.to_string(),
            seconds: None,
        }
    }

    pub fn flag(name: impl Into<String>, ok: bool, reference: &str) -> Self {
        Self::compare(name, if ok { 1.0 } else { 0.0 }, 1.0, 0.0, reference)
    }

    pub fn skip(
        name: impl Into<String>,
        measured: Option<f64>,
        expected: Option<f64>,
        reference: &str,
    ) -> Self {
        Self {
            check: name.into(),
            status: Status::Skip,
            measured: measured.and_then(finite),
            expected: expected.and_then(finite),
            tol: None,
            reference: reference.to_string(),
            seconds: None,
        }
    }

    pub fn failed(name: impl Into<String>, reference: &str) -> Self {
        Self {
            check: name.into(),
            status: Status::Fail,
            measured: None,
            expected: None,
            tol: None,
            reference: reference.to_string(),
            seconds: None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
}

impl Counts {
    fn add(&mut self, s: Status) {
        self.total += 1;
        match s {
            Status::Pass => self.passed += 1,
            Status::Fail => self.failed += 1,
            Status::Skip => self.skipped += 1,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    #[serde(flatten)]
    pub counts: Counts,
    /// Counts per name prefix before the first `/`.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub suites: BTreeMap<String, Counts>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub command: String,
    pub inputs: BTreeMap<String, Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub result: Option<Value>,
    pub checks: Vec<Check>,
    pub summary: Summary,
}

impl Report {
    pub fn new(command: &str, inputs: BTreeMap<String, Value>) -> Self {
        Self {
            schema: SCHEMA.to_string(),
            command: command.to_string(),
            inputs,
            result: None,
            checks: Vec::new(),
            summary: Summary::default(),
        }
    }

    pub fn with_result<T: Serialize>(mut self, result: &T) -> Result<Self, CliError> {
        // A text round trip normalizes non-finite numbers to null.
        let text = serde_json::to_string(result).map_err(|e| CliError::Io(e.to_string()))?;
        self.result = Some(serde_json::from_str(&text).map_err(|e| CliError::Io(e.to_string()))?);
        Ok(self)
    }

    /// Sorts checks by name and recomputes the summary.
    pub fn finish(mut self, checks: Vec<Check>, by_suite: bool) -> Self {
        self.checks = checks;
        self.checks.sort_by(|a, b| a.check.cmp(&b.check));
        let mut summary = Summary::default();
        for c in &self.checks {
            summary.counts.add(c.status);
            if by_suite {
                let suite = c.check.split('/').next().unwrap_or_default().to_string();
                summary.suites.entry(suite).or_default().add(c.status);
            }
        }
        self.summary = summary;
        self
    }

    pub fn passed(&self) -> bool {
        self.summary.counts.failed == 0
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let r: Report =
            serde_json::from_str(text).map_err(|e| CliError::Usage(format!("report: {e}")))?;
        if r.schema != SCHEMA {
            return Err(CliError::Usage(format!(
                "unsupported schema {:?}",
                r.schema
            )));
        }
        Ok(r)
    }

    pub fn to_csv(&self) -> String {
        checks_to_csv(&self.checks)
    }
}

fn number(x: Option<f64>) -> String {
    x.map(|v| serde_json::to_string(&v).expect("finite"))
        .unwrap_or_default()
}

pub fn checks_to_csv(checks: &[Check]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER).expect("in-memory write");
    for c in checks {
        w.write_record([
            c.check.as_str(),
            c.status.as_str(),
            &number(c.measured),
            &number(c.expected),
            &number(c.tol),
            &c.reference,
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}

pub fn checks_from_csv(text: &str) -> Result<Vec<Check>, CliError> {
    let bad = |e: String| CliError::Usage(format!("csv: {e}"));
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers().map_err(|e| bad(e.to_string()))?;
    if header.iter().ne(CSV_HEADER) {
        return Err(bad(format!("columns must be {}", CSV_HEADER.join(","))));
    }
    let num = |s: &str| -> Result<Option<f64>, CliError> {
        if s.is_empty() {
            Ok(None)
        } else {
            s.parse()
                .map(Some)
                .map_err(|_| bad(format!("bad number {s:?}")))
        }
    };
    r.records()
        .map(|rec| {
            let rec = rec.map_err(|e| bad(e.to_string()))?;
            Ok(Check {
                check: rec[0].to_string(),
                status: Status::parse(&rec[1])
                    .ok_or_else(|| bad(format!("bad status {:?}", &rec[1])))?,
                measured: num(&rec[2])?,
                expected: num(&rec[3])?,
                tol: num(&rec[4])?,
                reference: rec[5].to_string(),
                seconds: None,
            })
        })
        .collect()
}
