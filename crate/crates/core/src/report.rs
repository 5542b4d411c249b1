//! Structured results for verification checks and suites.

use serde::{Deserialize, Serialize};

/// One verified identity that failed, with both sides rendered exactly.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Finding {
    /// What was being checked, with the inputs rendered as text.
    pub context: String,
    pub expected: String,
    pub actual: String,
    /// Exact difference between the two sides, when meaningful.
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub residual: String,
}

/// Result of a named check or suite. `passed` is true iff `findings` is
/// empty. Timing is informational only and excluded from the structured
/// encoding so that identical inputs always serialize identically.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CheckReport {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<u64>,
    pub checks: u64,
    pub passed: bool,
    pub findings: Vec<Finding>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(skip)]
    pub elapsed_ms: u128,
}

impl CheckReport {
    pub fn new(name: impl Into<String>) -> Self {
        CheckReport {
            name: name.into(),
            seed: None,
            samples: None,
            checks: 0,
            passed: true,
            findings: Vec::new(),
            notes: Vec::new(),
            elapsed_ms: 0,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn with_samples(mut self, samples: u64) -> Self {
        self.samples = Some(samples);
        self
    }

    /// Record one comparison; equal sides count as a passing check.
    pub fn check<T: PartialEq>(
        &mut self,
        context: impl Into<String>,
        expected: &T,
        actual: &T,
        render: impl Fn(&T) -> String,
    ) {
        self.checks += 1;
        if expected != actual {
            self.passed = false;
            self.findings.push(Finding {
                context: context.into(),
                expected: render(expected),
                actual: render(actual),
                residual: String::new(),
            });
        }
    }

    /// Record a condition that must hold.
    pub fn require(&mut self, context: impl Into<String>, ok: bool, detail: impl Into<String>) {
        self.checks += 1;
        if !ok {
            self.passed = false;
            self.findings.push(Finding {
                context: context.into(),
                expected: "identity holds".into(),
                actual: detail.into(),
                residual: String::new(),
            });
        }
    }

    pub fn fail(&mut self, context: impl Into<String>, expected: String, actual: String, residual: String) {
        self.checks += 1;
        self.passed = false;
        self.findings.push(Finding {
            context: context.into(),
            expected,
            actual,
            residual,
        });
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    /// Absorb a sub-report, prefixing its findings.
    pub fn merge(&mut self, sub: CheckReport) {
        self.checks += sub.checks;
        if !sub.passed {
            self.passed = false;
        }
        for f in sub.findings {
            self.findings.push(Finding {
                context: format!("{}: {}", sub.name, f.context),
                ..f
            });
        }
        for n in sub.notes {
            self.notes.push(format!("{}: {}", sub.name, n));
        }
    }

    /// Human-readable rendering, one line per finding.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let status = if self.passed { "PASS" } else { "FAIL" };
        out.push_str(&format!(
            "[{status}] {} ({} checks{}{})\n",
            self.name,
            self.checks,
            self.seed.map(|s| format!(", seed {s}")).unwrap_or_default(),
            if self.elapsed_ms > 0 {
                format!(", {} ms", self.elapsed_ms)
            } else {
                String::new()
            },
        ));
        for n in &self.notes {
            out.push_str(&format!("  note: {n}\n"));
        }
        for f in &self.findings {
            out.push_str(&format!(
                "  mismatch: {}\n    expected: {}\n    actual:   {}\n",
                f.context, f.expected, f.actual
            ));
            if !f.residual.is_empty() {
                out.push_str(&format!("    residual: {}\n", f.residual));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_iff_no_findings() {
        let mut r = CheckReport::new("demo");
        r.check("one equals one", &1, &1, |v| v.to_string());
        assert!(r.passed);
        r.check("one equals two", &1, &2, |v| v.to_string());
        assert!(!r.passed);
        assert_eq!(r.findings.len(), 1);
        assert_eq!(r.checks, 2);
    }

    #[test]
    fn timing_is_not_serialized() {
        let mut r = CheckReport::new("demo");
        r.elapsed_ms = 42;
        let json = serde_json::to_string(&r).unwrap();
        assert!(!json.contains("elapsed"));
    }
}
