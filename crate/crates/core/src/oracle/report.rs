use serde::Serialize;

use crate::closedform::QuantumNumbers;

/// What a check was run on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Subject {
    /// A bound-state level.
    Level { n: u32, l: u32 },
    /// Parameters of the confluent equation, `n̄` and `m`.
    Confluent { n_bar: u32, m: u32 },
    /// Whole-table checks.
    Table,
}

impl From<QuantumNumbers> for Subject {
    fn from(qn: QuantumNumbers) -> Self {
        Subject::Level {
            n: qn.n(),
            l: qn.l(),
        }
    }
}

impl std::fmt::Display for Subject {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Subject::Level { n, l } => write!(f, "n={n} l={l}"),
            Subject::Confluent { n_bar, m } => write!(f, "n_bar={n_bar} m={m}"),
            Subject::Table => write!(f, "table"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "kebab-case")]
pub enum Residual {
    /// Symbolic check whose residual vanished identically.
    ExactZero,
    /// Norm of a nonzero symbolic residual, or a floating residual.
    Norm(f64),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub subject: Subject,
    pub check_name: String,
    pub passed: bool,
    pub residual_norm: Residual,
    /// `None` for exact checks, which only pass on an exact zero.
    pub tolerance: Option<f64>,
    pub details: String,
}

impl VerificationReport {
    /// Exact check: passes iff the residual vanished.
    pub fn exact(
        subject: impl Into<Subject>,
        check_name: &str,
        residual: Residual,
        details: impl Into<String>,
    ) -> Self {
        VerificationReport {
            subject: subject.into(),
            check_name: check_name.to_string(),
            passed: residual == Residual::ExactZero,
            residual_norm: residual,
            tolerance: None,
            details: details.into(),
        }
    }

    /// Floating check: passes iff `residual <= tolerance` (NaN fails).
    pub fn numeric(
        subject: impl Into<Subject>,
        check_name: &str,
        residual: f64,
        tolerance: f64,
        details: impl Into<String>,
    ) -> Self {
        VerificationReport {
            subject: subject.into(),
            check_name: check_name.to_string(),
            passed: residual <= tolerance,
            residual_norm: Residual::Norm(residual),
            tolerance: Some(tolerance),
            details: details.into(),
        }
    }

    pub fn failed(subject: impl Into<Subject>, check_name: &str, details: impl Into<String>) -> Self {
        VerificationReport {
            subject: subject.into(),
            check_name: check_name.to_string(),
            passed: false,
            residual_norm: Residual::Norm(f64::INFINITY),
            tolerance: None,
            details: details.into(),
        }
    }

    pub fn named(mut self, check_name: &str) -> Self {
        self.check_name = check_name.to_string();
        self
    }
}
