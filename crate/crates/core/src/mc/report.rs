use serde::{Deserialize, Serialize};

use super::estimate::MCEstimate;

/// `violated` needs the LHS to exceed the RHS by this many standard errors.
pub const VIOLATION_SE: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Holds,
    Violated,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::Violated => "violated",
            Verdict::Inconclusive => "inconclusive",
        }
    }

    /// Violated beats inconclusive beats holds.
    pub fn worst(self, other: Verdict) -> Verdict {
        use Verdict::*;
        match (self, other) {
            (Violated, _) | (_, Violated) => Violated,
            (Inconclusive, _) | (_, Inconclusive) => Inconclusive,
            _ => Holds,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "value")]
pub enum Rhs {
    Exact(f64),
    Estimated(MCEstimate),
}

impl Rhs {
    pub fn value(&self) -> f64 {
        match self {
            Rhs::Exact(v) => *v,
            Rhs::Estimated(e) => e.value,
        }
    }

    pub fn std_error(&self) -> f64 {
        match self {
            Rhs::Exact(_) => 0.0,
            Rhs::Estimated(e) => e.std_error,
        }
    }
}

/// One-sided statistical comparison `lhs <= rhs`. When `lhs.log_domain`
/// is set both sides are logs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub name: String,
    pub lhs: MCEstimate,
    pub rhs: Rhs,
    /// `(rhs - lhs) / SE` with the combined standard error.
    pub margin: f64,
    pub verdict: Verdict,
    pub diagnostic: Option<String>,
}

impl InequalityReport {
    pub fn judge(name: impl Into<String>, lhs: MCEstimate, rhs: Rhs) -> Self {
        let (l, r) = (lhs.value, rhs.value());
        let se = (lhs.std_error.powi(2) + rhs.std_error().powi(2)).sqrt();
        let diff = r - l;
        let margin = if se > 0.0 {
            diff / se
        } else if diff == 0.0 {
            0.0
        } else {
            diff.signum() * f64::INFINITY
        };
        let verdict = if r.is_nan() || l.is_nan() || r == f64::INFINITY || se.is_nan() {
            Verdict::Inconclusive
        } else if l - VIOLATION_SE * se > r {
            Verdict::Violated
        } else {
            Verdict::Holds
        };
        Self { name: name.into(), lhs, rhs, margin, verdict, diagnostic: None }
    }

    pub fn with_diagnostic(mut self, note: impl Into<String>) -> Self {
        self.diagnostic = Some(note.into());
        self
    }

    /// Forces an inconclusive verdict, keeping the estimates.
    pub fn inconclusive(mut self, note: impl Into<String>) -> Self {
        self.verdict = Verdict::Inconclusive;
        self.diagnostic = Some(note.into());
        self
    }

    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }

    pub fn violated(&self) -> bool {
        self.verdict == Verdict::Violated
    }
}

/// The worst verdict of a list, `holds` for an empty list.
pub fn overall(reports: &[InequalityReport]) -> Verdict {
    reports.iter().fold(Verdict::Holds, |v, r| v.worst(r.verdict))
}
