//! Result records shared by the evaluators.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// A computed sum or integral with its error budget.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpSumResult {
    pub value: Complex64,
    /// Truncation plus rounding bound.
    pub abs_err: f64,
    pub terms: u64,
    pub meta: BTreeMap<String, String>,
}

impl ExpSumResult {
    pub fn new(value: Complex64, abs_err: f64, terms: u64) -> Self {
        Self { value, abs_err, terms, meta: BTreeMap::new() }
    }

    pub fn real(value: f64, abs_err: f64, terms: u64) -> Self {
        Self::new(Complex64::new(value, 0.0), abs_err, terms)
    }

    pub fn zero() -> Self {
        Self::real(0.0, 0.0, 0)
    }

    pub fn with_meta(mut self, key: &str, value: impl ToString) -> Self {
        self.meta.insert(key.to_string(), value.to_string());
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    WithinEnvelope,
    OutsideEnvelope,
    Inconclusive,
}

/// lhs against rhs with the size of the error term expected between them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub lhs: f64,
    pub rhs: f64,
    pub difference: f64,
    pub envelope: f64,
    pub verdict: Verdict,
    pub notes: Vec<String>,
}

impl ComparisonReport {
    /// Verdict is within/outside depending on |lhs − rhs| ≤ slack·envelope,
    /// or inconclusive when `inconclusive` is set.
    pub fn new(lhs: f64, rhs: f64, envelope: f64, slack: f64, inconclusive: bool) -> Self {
        let difference = lhs - rhs;
        let verdict = if inconclusive || !difference.is_finite() {
            Verdict::Inconclusive
        } else if difference.abs() <= slack * envelope {
            Verdict::WithinEnvelope
        } else {
            Verdict::OutsideEnvelope
        };
        Self { lhs, rhs, difference, envelope, verdict, notes: Vec::new() }
    }
}
