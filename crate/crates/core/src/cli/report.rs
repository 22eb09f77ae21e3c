//! Machine-readable run reports and the exit-code contract.

use std::fmt::Write as _;
use std::time::Duration;

use serde::Serialize;

/// Stable process exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Exit {
    Ok = 0,
    Semantic = 1,
    Input = 2,
    Resource = 3,
}

impl Exit {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Summary {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CaseResult {
    pub instance: String,
    pub witness: Option<String>,
    pub verdict: String,
    pub ok: bool,
    /// VM steps of the verifying run, when the relation is a program.
    pub steps: Option<usize>,
    pub detail: Option<String>,
}

impl CaseResult {
    pub fn new(instance: impl Into<String>, ok: bool, verdict: impl Into<String>) -> Self {
        CaseResult { instance: instance.into(), witness: None, verdict: verdict.into(), ok, steps: None, detail: None }
    }

    pub fn witness(mut self, w: impl Into<String>) -> Self {
        self.witness = Some(w.into());
        self
    }

    pub fn steps(mut self, s: usize) -> Self {
        self.steps = Some(s);
        self
    }

    pub fn detail(mut self, d: impl Into<String>) -> Self {
        self.detail = Some(d.into());
        self
    }
}

/// `summary` is `FAIL` iff some case failed. Apart from `duration_ms` the
/// report depends only on the inputs and the config.
#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub command: Vec<String>,
    pub cases: Vec<CaseResult>,
    pub notes: Vec<String>,
    pub summary: Summary,
    pub exit: Exit,
    pub duration_ms: u64,
}

impl RunReport {
    /// Callers pass cases in canonical instance order; parallel checks
    /// collect in input order, so execution order never shows.
    pub fn new(command: Vec<String>, cases: Vec<CaseResult>, notes: Vec<String>, elapsed: Duration) -> Self {
        let summary = if cases.iter().all(|c| c.ok) { Summary::Pass } else { Summary::Fail };
        let exit = if summary == Summary::Pass { Exit::Ok } else { Exit::Semantic };
        RunReport { command, cases, notes, summary, exit, duration_ms: elapsed.as_millis() as u64 }
    }

    /// Raises the exit code, never lowers it.
    pub fn escalate(mut self, exit: Exit) -> Self {
        self.exit = self.exit.max(exit);
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.cases {
            let _ = write!(out, "{} {}", c.verdict, c.instance);
            if let Some(w) = &c.witness {
                let _ = write!(out, " witness={w}");
            }
            if let Some(s) = c.steps {
                let _ = write!(out, " steps={s}");
            }
            if let Some(d) = &c.detail {
                let _ = write!(out, " ({d})");
            }
            out.push('\n');
        }
        for n in &self.notes {
            let _ = writeln!(out, "note: {n}");
        }
        let summary = if self.summary == Summary::Pass { "PASS" } else { "FAIL" };
        let _ = writeln!(out, "{summary} ({} cases, {} ms)", self.cases.len(), self.duration_ms);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn summary_and_exit() {
        let cases = vec![CaseResult::new("1", true, "ok"), CaseResult::new("10", false, "bad")];
        let r = RunReport::new(vec!["x".into()], cases, vec![], Duration::ZERO);
        assert_eq!(r.summary, Summary::Fail);
        assert_eq!(r.exit, Exit::Semantic);
        assert_eq!(r.clone().escalate(Exit::Resource).exit, Exit::Resource);
        assert_eq!(r.escalate(Exit::Ok).exit, Exit::Semantic);
        let json = RunReport::new(vec![], vec![], vec![], Duration::ZERO).to_json();
        assert!(json.contains("\"summary\": \"PASS\""));
    }
}
