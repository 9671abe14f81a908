//! JSON reports and byte-stable output.

use std::io::Write;
use std::path::Path;

use serde::ser::Error as _;
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

use qthreshold::threshold::format_real;
use qthreshold::{Status, Word};

use crate::{CliError, CliResult};

/// A float written with 17 significant digits; non-finite values become
/// `null`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Real(pub f64);

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.is_finite() {
            RawValue::from_string(format_real(self.0)).map_err(S::Error::custom)?.serialize(s)
        } else {
            s.serialize_none()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerdictLabel {
    Holds,
    Vacuous,
    Violated,
    PreconditionUnmet,
}

impl From<Status> for VerdictLabel {
    fn from(s: Status) -> Self {
        match s {
            Status::Holds => VerdictLabel::Holds,
            Status::Vacuous => VerdictLabel::Vacuous,
            Status::Violated => VerdictLabel::Violated,
        }
    }
}

/// One checked instance.
#[derive(Debug, Clone, Serialize)]
pub struct Entry {
    pub verifier: String,
    pub instance: String,
    /// Signed slack of the inequality; `null` for yes/no checks.
    pub margin: Option<Real>,
    pub verdict: VerdictLabel,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Box<RawValue>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub details: Option<Box<RawValue>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
}

impl Entry {
    pub fn new(verifier: &str, instance: impl Into<String>, margin: Option<f64>, verdict: VerdictLabel) -> Self {
        Entry {
            verifier: verifier.to_string(),
            instance: instance.into(),
            margin: margin.map(Real),
            verdict,
            witness: None,
            details: None,
            message: None,
        }
    }

    pub fn with_witness<T: Serialize>(mut self, w: &T) -> Self {
        self.witness = Some(raw(w));
        self
    }

    pub fn with_details<T: Serialize>(mut self, d: &T) -> Self {
        self.details = Some(raw(d));
        self
    }

    pub fn unmet(verifier: &str, instance: impl Into<String>, why: &qthreshold::Error) -> Self {
        let mut e = Entry::new(verifier, instance, None, VerdictLabel::PreconditionUnmet);
        e.message = Some(why.to_string());
        e
    }

    pub fn is_violation(&self) -> bool {
        self.verdict == VerdictLabel::Violated
    }
}

/// Serialized once, embedded verbatim.
pub fn raw<T: Serialize>(value: &T) -> Box<RawValue> {
    let text = serde_json::to_string(value).expect("report values serialize");
    RawValue::from_string(text).expect("serde_json output is valid JSON")
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub verifier: String,
    pub instances: usize,
    pub min_margin: Option<Real>,
    pub violations: usize,
    pub precondition_unmet: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub seed: u64,
    pub entries: Vec<Entry>,
    pub summary: Vec<Summary>,
}

impl Report {
    /// Builds the per-verifier summary in first-appearance order.
    pub fn new(command: &str, seed: u64, entries: Vec<Entry>) -> Self {
        let mut summary: Vec<Summary> = Vec::new();
        for e in &entries {
            let pos = match summary.iter().position(|s| s.verifier == e.verifier) {
                Some(pos) => pos,
                None => {
                    summary.push(Summary {
                        verifier: e.verifier.clone(),
                        instances: 0,
                        min_margin: None,
                        violations: 0,
                        precondition_unmet: 0,
                    });
                    summary.len() - 1
                }
            };
            let s = &mut summary[pos];
            s.instances += 1;
            s.violations += e.is_violation() as usize;
            s.precondition_unmet += (e.verdict == VerdictLabel::PreconditionUnmet) as usize;
            if let Some(Real(m)) = e.margin {
                if s.min_margin.is_none_or(|Real(cur)| m < cur) {
                    s.min_margin = Some(Real(m));
                }
            }
        }
        Report {
            command: command.to_string(),
            seed,
            entries,
            summary,
        }
    }

    pub fn violations(&self) -> Vec<&Entry> {
        self.entries.iter().filter(|e| e.is_violation()).collect()
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report values serialize");
    s.push('\n');
    s
}

/// Writes to `path`, or standard output when absent.
pub fn emit(text: &str, path: Option<&Path>) -> CliResult<()> {
    match path {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|source| CliError::Io {
                    path: "<stdout>".into(),
                    source,
                })
        }
    }
}

/// Emits the report and, if anything was violated, the witness file. Returns
/// [`CliError::Violation`] in that case.
pub fn finish(report: &Report, out: Option<&Path>, witness: Option<&Path>) -> CliResult<()> {
    emit(&to_json(report), out)?;
    let bad = report.violations();
    if bad.is_empty() {
        return Ok(());
    }
    let text = to_json(&bad);
    let default_path = out.map(|p| {
        let mut s = p.as_os_str().to_owned();
        s.push(".witness.json");
        std::path::PathBuf::from(s)
    });
    match witness.map(Path::to_path_buf).or(default_path) {
        Some(path) => emit(&text, Some(&path))?,
        None => eprint!("{text}"),
    }
    Err(CliError::Violation(bad.len()))
}

pub fn word(w: &Word) -> Vec<u8> {
    w.entries().to_vec()
}
