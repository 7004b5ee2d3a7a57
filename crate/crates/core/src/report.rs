//! The machine-readable record of a run and its human summary.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::harness::CheckResult;
use crate::kernel::LabelVerdict;
use crate::univalence::{Fact, UnivalenceCertificate};
use crate::vobj::Node;

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub checks: Vec<CheckResult>,
    /// Opt-in runs that are expected to find counterexamples; they never
    /// affect `pass`.
    pub diagnostics: Vec<CheckResult>,
    pub facts: Vec<Fact>,
    pub certificates: Vec<UnivalenceCertificate>,
    /// Full verdict of a single-pair query.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<LabelVerdict>,
    /// Object computed by a construction verb.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub result: Option<Node>,
    pub pass: bool,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Report { command: command.into(), ..Default::default() }
    }

    /// Recomputes `pass` from checks, facts and certificates.
    pub fn finish(mut self) -> Self {
        self.pass = self.checks.iter().all(CheckResult::passed)
            && self.facts.iter().all(|f| f.holds)
            && self.certificates.iter().all(UnivalenceCertificate::is_valid);
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn human(&self) -> String {
        let mut out = String::new();
        if let Some(r) = &self.result {
            let _ = writeln!(out, "{r}");
        }
        if let Some(v) = &self.verdict {
            let _ = writeln!(out, "{v}");
        }
        for c in &self.checks {
            line(&mut out, c, if c.passed() { "PASS" } else { "FAIL" });
        }
        for c in &self.diagnostics {
            let tag = if c.passed() { "diagnostic: no counterexample" } else { "diagnostic: counterexample" };
            line(&mut out, c, tag);
        }
        for f in &self.facts {
            let _ = writeln!(out, "{} {}", if f.holds { "PASS" } else { "FAIL" }, f.name);
        }
        if !self.certificates.is_empty() {
            let valid = self.certificates.iter().filter(|c| c.is_valid()).count();
            let _ = writeln!(
                out,
                "{} univalence certificates: {valid}/{} valid",
                if valid == self.certificates.len() { "PASS" } else { "FAIL" },
                self.certificates.len()
            );
            for c in self.certificates.iter().filter(|c| !c.is_valid()) {
                let _ = writeln!(out, "  {} → {} fails at {:?}", c.total, c.base, c.first_failure());
            }
        }
        let _ = writeln!(out, "{}", if self.pass { "overall: PASS" } else { "overall: FAIL" });
        out
    }
}

fn line(out: &mut String, c: &CheckResult, tag: &str) {
    let _ = writeln!(
        out,
        "{tag} {} [{}] instances={} premises={} violations={} ({:.2?})",
        c.check, c.universe, c.instances_tested, c.premises_held, c.violation_count, c.elapsed
    );
    for v in &c.violations {
        let fams: Vec<String> = v
            .roles
            .iter()
            .zip(&v.families)
            .map(|(r, f)| format!("{r}={f}"))
            .collect();
        let _ = writeln!(out, "    #{} {} : {}", v.instance, fams.join(" "), v.detail);
    }
}
