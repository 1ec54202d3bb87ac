//! JSON verification reports.

use serde::Serialize;
use serde_json::Value;

use crate::error::Result;

pub const REPORT_VERSION: &str = env!("CARGO_PKG_VERSION");

/// One verified property. Non-finite numbers serialize as `null`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub id: String,
    /// Name of the result being checked.
    pub paper_ref: String,
    pub params: Value,
    pub observed: Value,
    pub bound_or_reference: Value,
    pub tolerance: Option<f64>,
    pub pass: bool,
}

impl Check {
    /// Passes when `observed <= bound`; NaN fails.
    pub fn at_most(id: impl Into<String>, paper_ref: &str, params: Value, observed: f64, bound: f64) -> Self {
        Check {
            id: id.into(),
            paper_ref: paper_ref.into(),
            params,
            observed: Value::from(observed),
            bound_or_reference: Value::from(bound),
            tolerance: Some(bound),
            pass: observed <= bound,
        }
    }

    /// Passes when `|observed - reference| <= tol`.
    pub fn close_to(id: impl Into<String>, paper_ref: &str, params: Value, observed: f64, reference: f64, tol: f64) -> Self {
        Check {
            id: id.into(),
            paper_ref: paper_ref.into(),
            params,
            observed: Value::from(observed),
            bound_or_reference: Value::from(reference),
            tolerance: Some(tol),
            pass: (observed - reference).abs() <= tol,
        }
    }

    pub fn custom(
        id: impl Into<String>,
        paper_ref: &str,
        params: Value,
        observed: Value,
        reference: Value,
        tolerance: Option<f64>,
        pass: bool,
    ) -> Self {
        Check {
            id: id.into(),
            paper_ref: paper_ref.into(),
            params,
            observed,
            bound_or_reference: reference,
            tolerance,
            pass,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub version: String,
    pub config_echo: Value,
    pub checks: Vec<Check>,
}

impl Report {
    /// Checks are sorted by id so the output is independent of run order.
    pub fn new(config_echo: Value, mut checks: Vec<Check>) -> Self {
        checks.sort_by(|a, b| a.id.cmp(&b.id));
        Report {
            version: REPORT_VERSION.into(),
            config_echo,
            checks,
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn get(&self, id: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }
}
