//! Structured results of law and equivalence checks.

use serde::{Deserialize, Serialize};
use serde_json::Value as Json;

use crate::exhaust::Exploration;

/// Outcome of one named check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub law: String,
    /// Inputs covered. For exhaustive checks this is the size of the whole
    /// input space; for sampled checks it is the number of cases run.
    pub cases: u64,
    /// Property evaluations needed to cover `cases`, when fewer.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub evaluations: Option<u64>,
    pub passed: bool,
    #[serde(default)]
    pub skipped: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Json>,
    /// Check-specific extras such as seeds and bounds.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub details: Option<Json>,
}

impl CheckResult {
    pub fn from_exploration(law: impl Into<String>, e: Exploration) -> Self {
        CheckResult {
            law: law.into(),
            cases: u64::try_from(e.covered).unwrap_or(u64::MAX),
            evaluations: Some(e.leaves),
            passed: e.counterexample.is_none(),
            skipped: 0,
            counterexample: e.counterexample,
            details: None,
        }
    }

    pub fn with_details(mut self, details: Json) -> Self {
        self.details = Some(details);
        self
    }
}

/// Accumulates a sampled check case by case. Only the first failure is kept.
#[derive(Clone, Debug)]
pub struct Tally {
    law: String,
    cases: u64,
    skipped: u64,
    counterexample: Option<Json>,
}

impl Tally {
    pub fn new(law: impl Into<String>) -> Self {
        Tally {
            law: law.into(),
            cases: 0,
            skipped: 0,
            counterexample: None,
        }
    }

    pub fn pass(&mut self) {
        self.cases += 1;
    }

    pub fn skip(&mut self) {
        self.skipped += 1;
    }

    pub fn fail(&mut self, counterexample: Json) {
        self.cases += 1;
        if self.counterexample.is_none() {
            self.counterexample = Some(counterexample);
        }
    }

    /// Records a case from an optional failure detail.
    pub fn record(&mut self, failure: Option<Json>) {
        match failure {
            None => self.pass(),
            Some(ce) => self.fail(ce),
        }
    }

    pub fn cases(&self) -> u64 {
        self.cases
    }

    pub fn skipped(&self) -> u64 {
        self.skipped
    }

    pub fn merge(&mut self, other: Tally) {
        self.cases += other.cases;
        self.skipped += other.skipped;
        if self.counterexample.is_none() {
            self.counterexample = other.counterexample;
        }
    }

    pub fn finish(self) -> CheckResult {
        CheckResult {
            law: self.law,
            cases: self.cases,
            evaluations: None,
            passed: self.counterexample.is_none(),
            skipped: self.skipped,
            counterexample: self.counterexample,
            details: None,
        }
    }
}

/// A list of check results, kept sorted by law name.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub checks: Vec<CheckResult>,
}

impl Report {
    pub fn new(mut checks: Vec<CheckResult>) -> Self {
        checks.sort_by(|a, b| a.law.cmp(&b.law));
        Report { checks }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn get(&self, law: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.law == law)
    }

    pub fn merge(self, other: Report) -> Report {
        let mut checks = self.checks;
        checks.extend(other.checks);
        Report::new(checks)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn tally_keeps_first_failure() {
        let mut t = Tally::new("x");
        t.pass();
        t.fail(json!(1));
        t.fail(json!(2));
        t.skip();
        let r = t.finish();
        assert_eq!(r.cases, 3);
        assert_eq!(r.skipped, 1);
        assert!(!r.passed);
        assert_eq!(r.counterexample, Some(json!(1)));
    }

    #[test]
    fn merge_is_order_independent() {
        let a = Report::new(vec![Tally::new("b").finish()]);
        let b = Report::new(vec![Tally::new("a").finish()]);
        assert_eq!(a.clone().merge(b.clone()), b.merge(a));
    }

    #[test]
    fn serializes_optional_fields_only_when_present() {
        let r = Tally::new("law").finish();
        let j = serde_json::to_value(&r).unwrap();
        assert_eq!(
            j,
            json!({"law": "law", "cases": 0, "passed": true, "skipped": 0})
        );
    }
}
