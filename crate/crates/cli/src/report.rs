//! Machine-readable verification reports.

use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct CaseRecord {
    pub case: String,
    pub pass: bool,
    pub dev: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub suite: String,
    pub seed: u64,
    pub cases: usize,
    pub failures: usize,
    pub max_dev: f64,
    pub records: Vec<CaseRecord>,
}

impl Report {
    pub fn new(suite: &str, seed: u64) -> Self {
        Report {
            suite: suite.to_string(),
            seed,
            cases: 0,
            failures: 0,
            max_dev: 0.0,
            records: Vec::new(),
        }
    }

    pub fn push(&mut self, case: String, pass: bool, dev: f64) {
        self.cases += 1;
        if !pass {
            self.failures += 1;
        }
        if dev.is_finite() {
            self.max_dev = self.max_dev.max(dev);
        }
        // Keep the full per-case log only while it stays reasonably small;
        // failures are always recorded.
        if !pass || self.records.len() < 2000 {
            self.records.push(CaseRecord { case, pass, dev });
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }
}
