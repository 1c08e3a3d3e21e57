//! Uniform reporting: named checks with pass/fail status and details,
//! rendered identically as text or JSON.

use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn pass(name: &str, detail: impl Into<String>) -> Self {
        Check {
            name: name.to_string(),
            passed: true,
            detail: detail.into(),
        }
    }

    pub fn fail(name: &str, detail: impl Into<String>) -> Self {
        Check {
            name: name.to_string(),
            passed: false,
            detail: detail.into(),
        }
    }

    pub fn from_counterexamples(name: &str, checked: usize, counterexamples: &[String]) -> Self {
        if counterexamples.is_empty() {
            Check::pass(name, format!("{checked} cases checked"))
        } else {
            Check::fail(
                name,
                format!(
                    "{} of {checked} cases failed; first: {}",
                    counterexamples.len(),
                    counterexamples[0]
                ),
            )
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub checks: Vec<Check>,
    pub elapsed_ms: u128,
}

impl Report {
    pub fn new(command: &str, checks: Vec<Check>, elapsed_ms: u128) -> Self {
        Report {
            command: command.to_string(),
            checks,
            elapsed_ms,
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn render_text(&self) -> String {
        let mut out = format!("# {}\n", self.command);
        for c in &self.checks {
            out.push_str(&format!(
                "{} {} — {}\n",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.detail
            ));
        }
        out.push_str(&format!(
            "{} ({} checks, {} ms)\n",
            if self.passed() { "ok" } else { "FAILED" },
            self.checks.len(),
            self.elapsed_ms
        ));
        out
    }

    pub fn render_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
