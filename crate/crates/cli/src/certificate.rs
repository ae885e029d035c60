use std::time::Instant;

use cubic_jordan::report::CheckStatus;
use cubic_jordan::{CheckOutcome, Report, SampleConfig};
use serde::Serialize;
use serde_json::{Map, Value};

/// Machine-readable record of one command run.
///
/// Every field except `elapsed_ms` depends only on the command, its input
/// files and the sampling parameters.
#[derive(Debug, Serialize)]
pub struct Certificate {
    pub tool_version: &'static str,
    pub command: String,
    pub seed: u64,
    pub samples: usize,
    pub max_expand_dim: usize,
    pub status: CheckStatus,
    pub checks: Vec<CheckOutcome>,
    #[serde(flatten)]
    pub extras: Map<String, Value>,
    pub elapsed_ms: u64,
}

pub struct CertificateBuilder {
    command: String,
    cfg: SampleConfig,
    checks: Vec<CheckOutcome>,
    extras: Map<String, Value>,
    started: Instant,
}

impl CertificateBuilder {
    pub fn new(command: impl Into<String>, cfg: SampleConfig) -> Self {
        CertificateBuilder {
            command: command.into(),
            cfg,
            checks: Vec::new(),
            extras: Map::new(),
            started: Instant::now(),
        }
    }

    pub fn push(&mut self, check: CheckOutcome) {
        self.checks.push(check);
    }

    /// Appends a report, prefixing each check name with `stage: `.
    pub fn extend_staged(&mut self, stage: &str, report: Report) {
        for mut c in report.checks {
            c.name = format!("{stage}: {}", c.name);
            self.checks.push(c);
        }
    }

    pub fn extend(&mut self, report: Report) {
        self.checks.extend(report.checks);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckOutcome::passed)
    }

    pub fn extra(&mut self, key: &str, value: impl Serialize) {
        let value = serde_json::to_value(value).expect("certificate extras serialize to JSON");
        self.extras.insert(key.to_string(), value);
    }

    pub fn finish(self) -> Certificate {
        let status = if self.passed() {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        };
        Certificate {
            tool_version: env!("CARGO_PKG_VERSION"),
            command: self.command,
            seed: self.cfg.seed,
            samples: self.cfg.samples,
            max_expand_dim: self.cfg.max_expand_dim,
            status,
            checks: self.checks,
            extras: self.extras,
            elapsed_ms: self.started.elapsed().as_millis() as u64,
        }
    }
}

impl Certificate {
    pub fn passed(&self) -> bool {
        self.status == CheckStatus::Pass
    }

    /// The short report printed to stderr.
    pub fn summary(&self) -> String {
        let total = self.checks.len();
        let failed: Vec<&str> = self
            .checks
            .iter()
            .filter(|c| !c.passed())
            .map(|c| c.name.as_str())
            .collect();
        let mut out = format!(
            "{} {}: {}/{} checks passed in {} ms",
            if failed.is_empty() { "PASS" } else { "FAIL" },
            self.command,
            total - failed.len(),
            total,
            self.elapsed_ms
        );
        for name in failed {
            out.push_str("\n  failed: ");
            out.push_str(name);
        }
        out
    }
}
