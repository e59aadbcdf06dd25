//! Check outcomes as serializable records.

use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// One verified statement: what was checked, over which range, and a
/// witness when it failed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub status: Status,
    pub range: String,
    pub checked: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub details: Option<Value>,
}

impl CheckReport {
    pub fn pass(name: impl Into<String>, range: impl Into<String>, checked: u64) -> Self {
        Self {
            name: name.into(),
            status: Status::Pass,
            range: range.into(),
            checked,
            witness: None,
            details: None,
        }
    }

    pub fn fail(
        name: impl Into<String>,
        range: impl Into<String>,
        checked: u64,
        witness: impl Into<String>,
    ) -> Self {
        Self {
            name: name.into(),
            status: Status::Fail,
            range: range.into(),
            checked,
            witness: Some(witness.into()),
            details: None,
        }
    }

    /// Pass when `witness` is `None`.
    pub fn from_witness(
        name: impl Into<String>,
        range: impl Into<String>,
        checked: u64,
        witness: Option<String>,
    ) -> Self {
        match witness {
            None => Self::pass(name, range, checked),
            Some(w) => Self::fail(name, range, checked, w),
        }
    }

    pub fn with_details(mut self, details: Value) -> Self {
        self.details = Some(details);
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub passed: bool,
    pub checks: Vec<CheckReport>,
}

impl SuiteReport {
    pub fn new(suite: impl Into<String>, seed: Option<u64>, checks: Vec<CheckReport>) -> Self {
        let passed = checks.iter().all(CheckReport::passed);
        Self { suite: suite.into(), seed, passed, checks }
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckReport> {
        self.checks.iter().filter(|c| !c.passed())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_shape() {
        let r = SuiteReport::new(
            "demo",
            None,
            vec![CheckReport::pass("a", "exhaustive", 3), CheckReport::fail("b", "n <= 2", 1, "x0")],
        );
        assert!(!r.passed);
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["checks"][0]["status"], "pass");
        assert!(v["checks"][0].get("witness").is_none());
        assert_eq!(v["checks"][1]["witness"], "x0");
        assert!(v.get("seed").is_none());
        assert_eq!(r.failures().count(), 1);
    }
}
