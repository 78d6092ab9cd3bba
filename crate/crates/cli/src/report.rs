//! Verification reports, their JSON form and the golden-text corpus.

use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};

/// Bumped whenever a field of [`VerificationReport`] changes meaning.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Error => "ERROR",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema: u32,
    pub id: String,
    pub system: String,
    pub parameters: BTreeMap<String, String>,
    pub status: Status,
    pub expected: String,
    pub computed: String,
    pub wall_time_ms: u64,
}

/// What a check found: pass/fail plus the two canonical texts.
pub struct Finding {
    pub passed: bool,
    pub expected: String,
    pub computed: String,
}

impl Finding {
    pub fn new(passed: bool, expected: impl Into<String>, computed: impl Into<String>) -> Finding {
        Finding { passed, expected: expected.into(), computed: computed.into() }
    }

    /// Passes iff the two texts coincide.
    pub fn texts(expected: impl Into<String>, computed: impl Into<String>) -> Finding {
        let (expected, computed) = (expected.into(), computed.into());
        Finding { passed: expected == computed, expected, computed }
    }
}

/// A check about to run: its id, system and parameters.
pub struct Check {
    id: String,
    system: String,
    parameters: BTreeMap<String, String>,
}

impl Check {
    pub fn new(id: impl Into<String>, system: impl Into<String>) -> Check {
        Check { id: id.into(), system: system.into(), parameters: BTreeMap::new() }
    }

    pub fn param(mut self, name: &str, value: impl ToString) -> Check {
        self.parameters.insert(name.to_string(), value.to_string());
        self
    }

    pub fn params<'a>(mut self, pairs: impl IntoIterator<Item = (&'a str, String)>) -> Check {
        for (k, v) in pairs {
            self.parameters.insert(k.to_string(), v);
        }
        self
    }

    pub fn run(self, body: impl FnOnce() -> multiloc::Result<Finding>) -> VerificationReport {
        let start = Instant::now();
        let outcome = body();
        let wall_time_ms = start.elapsed().as_millis() as u64;
        let (status, expected, computed) = match outcome {
            Ok(f) => (if f.passed { Status::Pass } else { Status::Fail }, f.expected, f.computed),
            Err(e) => (Status::Error, String::new(), e.to_string()),
        };
        VerificationReport {
            schema: SCHEMA_VERSION,
            id: self.id,
            system: self.system,
            parameters: self.parameters,
            status,
            expected,
            computed,
            wall_time_ms,
        }
    }
}

pub fn write_reports(path: &Path, reports: &[VerificationReport]) -> io::Result<()> {
    let json = serde_json::to_string_pretty(reports).map_err(io::Error::other)?;
    fs::write(path, json + "\n")
}

/// Compares each report's computed text with `<dir>/<id>.txt`, or writes the
/// file when `bless` is set. Reports without a golden file are left alone.
pub fn apply_golden(dir: &Path, reports: &mut [VerificationReport], bless: bool) -> io::Result<()> {
    if bless {
        fs::create_dir_all(dir)?;
    }
    for r in reports.iter_mut().filter(|r| r.status != Status::Error) {
        let path = dir.join(format!("{}.txt", r.id));
        if bless {
            fs::write(&path, format!("{}\n", r.computed))?;
            continue;
        }
        match fs::read_to_string(&path) {
            Ok(golden) if golden.trim_end_matches('\n') != r.computed => {
                r.status = Status::Fail;
                r.computed = format!("{} (golden: {})", r.computed, golden.trim_end());
            }
            Ok(_) => {}
            Err(e) if e.kind() == io::ErrorKind::NotFound => {}
            Err(e) => return Err(e),
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_uses_lowercase_status() {
        let r = Check::new("x", "chi2").param("a", "1/2").run(|| Ok(Finding::texts("1", "1")));
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["status"], "pass");
        assert_eq!(json["parameters"]["a"], "1/2");
        assert_eq!(json["schema"], SCHEMA_VERSION);
        let back: VerificationReport = serde_json::from_value(json).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn errors_become_error_reports() {
        let r = Check::new("y", "chi2").run(|| Err(multiloc::Error::DivisionByZero));
        assert_eq!(r.status, Status::Error);
        assert_eq!(r.computed, "division by zero");
    }
}
