//! Verification reports shared by every suite and the CLI.

use std::time::Instant;

use serde::Serialize;

use crate::ring::GradedPoly;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    /// Informational finding that does not gate the exit status.
    DerivedNote,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub id: String,
    pub anchor: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    /// Milliseconds; left out of serialized reports unless timings are requested.
    #[serde(skip)]
    pub wall_ms: f64,
}

impl Check {
    pub fn new(id: impl Into<String>, anchor: impl Into<String>, ok: bool) -> Check {
        Check {
            id: id.into(),
            anchor: anchor.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            residual: None,
            note: None,
            wall_ms: 0.0,
        }
    }

    /// Passes iff `residual` is zero; records its normal form otherwise.
    pub fn zero(id: impl Into<String>, anchor: impl Into<String>, residual: &GradedPoly) -> Check {
        let ok = residual.is_zero();
        let mut c = Check::new(id, anchor, ok);
        if !ok {
            c.residual = Some(residual.clear_denominators().to_string());
        }
        c
    }

    pub fn note(id: impl Into<String>, anchor: impl Into<String>, text: impl Into<String>) -> Check {
        Check {
            id: id.into(),
            anchor: anchor.into(),
            status: Status::DerivedNote,
            residual: None,
            note: Some(text.into()),
            wall_ms: 0.0,
        }
    }

    pub fn with_note(mut self, text: impl Into<String>) -> Check {
        self.note = Some(text.into());
        self
    }

    pub fn with_residual(mut self, text: impl Into<String>) -> Check {
        self.residual = Some(text.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn new(suite: impl Into<String>) -> SuiteReport {
        SuiteReport { suite: suite.into(), checks: Vec::new() }
    }

    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    /// Runs `f`, stamps the elapsed time on every check it returns.
    pub fn timed<F: FnOnce() -> Vec<Check>>(&mut self, f: F) {
        let t = Instant::now();
        let mut cs = f();
        let ms = t.elapsed().as_secs_f64() * 1e3 / cs.len().max(1) as f64;
        for c in &mut cs {
            c.wall_ms = ms;
        }
        self.checks.extend(cs);
    }

    pub fn extend(&mut self, cs: impl IntoIterator<Item = Check>) {
        self.checks.extend(cs);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed())
    }

    pub fn count(&self, s: Status) -> usize {
        self.checks.iter().filter(|c| c.status == s).count()
    }
}

/// Several suites bundled for output.
#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub schema: u32,
    pub passed: bool,
    pub suites: Vec<SuiteReport>,
}

impl VerificationReport {
    pub fn new(suites: Vec<SuiteReport>) -> VerificationReport {
        let passed = suites.iter().all(SuiteReport::passed);
        VerificationReport { schema: SCHEMA_VERSION, passed, suites }
    }

    pub fn to_json(&self, timings: bool) -> String {
        let mut v = serde_json::to_value(self).expect("report serializes");
        if timings {
            for (s, suite) in self.suites.iter().enumerate() {
                for (k, c) in suite.checks.iter().enumerate() {
                    v["suites"][s]["checks"][k]["wall_ms"] = serde_json::json!((c.wall_ms * 1000.0).round() / 1000.0);
                }
            }
        }
        serde_json::to_string_pretty(&v).expect("report serializes")
    }

    pub fn to_text(&self, timings: bool) -> String {
        let mut out = String::new();
        for s in &self.suites {
            out.push_str(&format!(
                "== {} ({} pass, {} fail, {} note)\n",
                s.suite,
                s.count(Status::Pass),
                s.count(Status::Fail),
                s.count(Status::DerivedNote)
            ));
            for c in &s.checks {
                let tag = match c.status {
                    Status::Pass => "PASS",
                    Status::Fail => "FAIL",
                    Status::DerivedNote => "NOTE",
                };
                out.push_str(&format!("{tag} {} [{}]", c.id, c.anchor));
                if timings {
                    out.push_str(&format!(" {:.3}ms", c.wall_ms));
                }
                out.push('\n');
                if let Some(n) = &c.note {
                    out.push_str(&format!("     {n}\n"));
                }
                if let Some(r) = &c.residual {
                    out.push_str(&format!("     residual: {r}\n"));
                }
            }
        }
        out.push_str(if self.passed { "overall: pass\n" } else { "overall: fail\n" });
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn notes_do_not_fail() {
        let mut s = SuiteReport::new("x");
        s.push(Check::note("a", "b", "c"));
        s.push(Check::zero("z", "zero", &GradedPoly::zero()));
        assert!(s.passed());
        s.push(Check::zero("nz", "nonzero", &GradedPoly::one()));
        assert!(!s.passed());
        assert_eq!(s.failures().next().unwrap().residual.as_deref(), Some("(1)"));
    }

    #[test]
    fn json_is_deterministic_without_timings() {
        let mut s = SuiteReport::new("x");
        s.timed(|| vec![Check::new("a", "b", true)]);
        let r = VerificationReport::new(vec![s]);
        let j = r.to_json(false);
        assert!(j.contains("\"schema\": 1"));
        assert!(!j.contains("wall_ms"));
        assert!(r.to_json(true).contains("wall_ms"));
    }
}
