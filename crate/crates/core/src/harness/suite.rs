use super::HarnessError;
use crate::lang::{execute, Outcome, Program, Status, TrapKind, Value};
use serde::{Deserialize, Serialize};

/// One test: call `entry(args)` and compare against `expect`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TestCase {
    pub name: String,
    pub entry: String,
    #[serde(default)]
    pub args: Vec<Value>,
    pub expect: Expectation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Expectation {
    Return(Value),
    Trap(TrapKind),
}

impl Expectation {
    pub fn matches(&self, outcome: &Outcome) -> bool {
        match (self, outcome.status) {
            (Expectation::Return(v), Status::Returned(got)) => *v == got,
            (Expectation::Trap(k), Status::Trap(got)) => *k == got,
            _ => false,
        }
    }
}

/// Parses a JSON array of test cases.
pub fn load_tests(json: &str) -> Result<Vec<TestCase>, HarnessError> {
    Ok(serde_json::from_str(json)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TestResult {
    pub name: String,
    pub passed: bool,
    pub outcome: Outcome,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GreenReport {
    pub green: bool,
    pub results: Vec<TestResult>,
}

impl GreenReport {
    pub fn failing(&self) -> Vec<String> {
        self.results.iter().filter(|r| !r.passed).map(|r| r.name.clone()).collect()
    }

    pub fn baseline_steps(&self) -> Vec<u64> {
        self.results.iter().map(|r| r.outcome.steps).collect()
    }

    pub fn require_green(&self) -> Result<(), HarnessError> {
        if self.green {
            Ok(())
        } else {
            Err(HarnessError::NotGreen(self.failing()))
        }
    }
}

/// Runs every test on the original program.
///
/// A test whose entry point is missing or whose arguments do not fit the
/// signature is an error rather than a failure.
pub fn verify_green(p: &Program, tests: &[TestCase], budget: u64) -> Result<GreenReport, HarnessError> {
    let mut results = Vec::with_capacity(tests.len());
    for t in tests {
        let outcome = execute(p, &t.entry, &t.args, budget).map_err(|source| HarnessError::Entry {
            test: t.name.clone(),
            source,
        })?;
        results.push(TestResult {
            name: t.name.clone(),
            passed: t.expect.matches(&outcome),
            outcome,
        });
    }
    Ok(GreenReport {
        green: results.iter().all(|r| r.passed),
        results,
    })
}
