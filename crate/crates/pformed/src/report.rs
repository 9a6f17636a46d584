//! Machine-readable verification reports. Serialization is deterministic:
//! maps are ordered, checks are sorted by name, and identical scenario + seed
//! always yield byte-identical JSON.

use std::collections::BTreeMap;

use serde::Serialize;

pub const REPORT_SCHEMA: u32 = 1;

#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    pub name: String,
    /// Independently computed values of the same quantity.
    pub routes: BTreeMap<String, f64>,
    /// Absolute residuals between routes.
    pub residuals: BTreeMap<String, f64>,
    /// Absolute threshold the worst residual was compared against.
    pub tolerance: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub terms: Option<BTreeMap<String, f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl CheckRecord {
    /// A check whose worst residual is compared against `tolerance`.
    pub fn new(name: impl Into<String>, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            routes: BTreeMap::new(),
            residuals: BTreeMap::new(),
            tolerance,
            pass: true,
            terms: None,
            order: None,
            error: None,
        }
    }

    pub fn route(mut self, key: &str, value: f64) -> Self {
        self.routes.insert(key.to_string(), value);
        self
    }

    pub fn residual(mut self, key: &str, value: f64) -> Self {
        self.residuals.insert(key.to_string(), value);
        self
    }

    pub fn terms(mut self, terms: BTreeMap<String, f64>) -> Self {
        self.terms = Some(terms);
        self
    }

    pub fn order(mut self, order: Option<f64>) -> Self {
        self.order = order;
        self
    }

    /// Set pass from the recorded residuals vs the tolerance.
    pub fn judge(mut self) -> Self {
        let worst = self.residuals.values().fold(0.0f64, |m, v| m.max(*v));
        self.pass = worst <= self.tolerance && self.error.is_none();
        self
    }

    /// A failed record carrying the error that prevented the check.
    pub fn failed(name: impl Into<String>, err: &crate::error::Error) -> Self {
        Self {
            name: name.into(),
            routes: BTreeMap::new(),
            residuals: BTreeMap::new(),
            tolerance: 0.0,
            pass: false,
            terms: None,
            order: None,
            error: Some(err.to_string()),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: u32,
    pub command: String,
    pub seed: u64,
    pub quad_order: usize,
    pub fd_step: f64,
    pub pass: bool,
    pub checks: Vec<CheckRecord>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl Report {
    pub fn new(
        command: &str,
        seed: u64,
        quad_order: usize,
        fd_step: f64,
        mut checks: Vec<CheckRecord>,
        warnings: Vec<String>,
    ) -> Self {
        checks.sort_by(|a, b| a.name.cmp(&b.name));
        let pass = checks.iter().all(|c| c.pass);
        Self {
            schema: REPORT_SCHEMA,
            command: command.to_string(),
            seed,
            quad_order,
            fd_step,
            pass,
            checks,
            warnings,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// One human-readable line per check.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let status = if c.pass { "PASS" } else { "FAIL" };
            let worst = c.residuals.values().fold(0.0f64, |m, v| m.max(*v));
            out.push_str(&format!(
                "[{status}] {:<42} residual {:>12.3e}  tol {:>9.1e}",
                c.name, worst, c.tolerance
            ));
            if let Some(order) = c.order {
                out.push_str(&format!("  order {order:.3}"));
            }
            if let Some(err) = &c.error {
                out.push_str(&format!("  error: {err}"));
            }
            out.push('\n');
        }
        let status = if self.pass { "PASS" } else { "FAIL" };
        out.push_str(&format!(
            "{status}: {}/{} checks passed (command {}, seed {})\n",
            self.checks.iter().filter(|c| c.pass).count(),
            self.checks.len(),
            self.command,
            self.seed
        ));
        out
    }
}
