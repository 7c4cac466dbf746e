//! Result records shared by the verifiers, the CLI and the C interface.

use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub check: String,
    pub params: Map<String, Value>,
    pub passed: bool,
    /// Number of entries (or vectors) where the identity failed.
    pub failures: usize,
    /// Number of individual identities examined.
    pub checked: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl VerificationReport {
    pub fn new(check: &str, params: &[(&str, Value)]) -> Self {
        VerificationReport {
            check: check.to_string(),
            params: params.iter().map(|(k, v)| (k.to_string(), v.clone())).collect(),
            passed: true,
            failures: 0,
            checked: 0,
            detail: None,
        }
    }

    /// Records one identity; the first failure's message is kept.
    pub fn record(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures += 1;
            self.passed = false;
            if self.detail.is_none() {
                self.detail = Some(msg());
            }
        }
    }

    pub fn merge(&mut self, other: &VerificationReport) {
        self.checked += other.checked;
        self.failures += other.failures;
        self.passed &= other.passed;
        if self.detail.is_none() {
            self.detail.clone_from(&other.detail);
        }
    }
}
