//! Machine-readable verification reports shared by the checkers and the CLI.

use num_complex::Complex64;
use serde::Serialize;
use serde_json::Value;

/// A numerically evaluated quantity together with a bound (or estimate) on
/// the truncation error it carries.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Evaluated {
    pub value: Complex64,
    pub tail: f64,
}

impl Evaluated {
    pub fn new(value: Complex64, tail: f64) -> Self {
        Evaluated { value, tail }
    }

    pub fn exact(value: Complex64) -> Self {
        Evaluated { value, tail: 0.0 }
    }

    pub fn scale(self, s: Complex64) -> Self {
        Evaluated { value: self.value * s, tail: self.tail * s.norm() }
    }
}

/// One checked instance: a group element at a point.
#[derive(Clone, Debug, Serialize)]
pub struct Case {
    pub label: String,
    #[serde(rename = "M")]
    pub element: Value,
    #[serde(rename = "Z")]
    pub point: Value,
    /// Both sides as `[re, im]`; absent for checks that only yield a residual.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lhs: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rhs: Option<[f64; 2]>,
    pub residual: f64,
    pub tail: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub test: String,
    pub cases: Vec<Case>,
    pub max_residual: f64,
    pub tol: f64,
    pub pass: bool,
    /// Free-form truncation and parameter metadata.
    pub truncation: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl VerificationReport {
    /// Assemble a report; `pass` holds iff every residual is finite and the
    /// largest one is within `tol`.
    pub fn from_cases(test: impl Into<String>, cases: Vec<Case>, tol: f64, truncation: Value) -> Self {
        let max_residual = cases.iter().map(|c| c.residual).fold(0.0, |a: f64, b| if b.is_nan() { f64::NAN } else { a.max(b) });
        let pass = max_residual.is_finite() && max_residual <= tol;
        VerificationReport { test: test.into(), cases, max_residual, tol, pass, truncation, seed: None }
    }

    /// Largest `|lhs|` or `|rhs|` seen, which exposes checks that pass only
    /// because both sides vanish.
    pub fn max_magnitude(&self) -> f64 {
        self.cases.iter().flat_map(|c| c.lhs.into_iter().chain(c.rhs)).map(|v| v[0].hypot(v[1])).fold(0.0, f64::max)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn max_tail(&self) -> f64 {
        self.cases.iter().map(|c| c.tail).fold(0.0, f64::max)
    }
}
