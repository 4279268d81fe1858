//! Result rows and their CSV / JSON serialization.

use std::io::Write;

use serde::Serialize;
use sgb_core::mc::{InequalityReport, MCEstimate, Verdict};

use crate::config::ExperimentConfig;

pub const CSV_HEADER: [&str; 6] = ["quantity", "paper_ref", "estimate", "std_error", "reference", "verdict"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RowVerdict {
    Holds,
    Violated,
    Inconclusive,
    Pass,
    Fail,
    Info,
}

impl RowVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            RowVerdict::Holds => "holds",
            RowVerdict::Violated => "violated",
            RowVerdict::Inconclusive => "inconclusive",
            RowVerdict::Pass => "pass",
            RowVerdict::Fail => "fail",
            RowVerdict::Info => "info",
        }
    }
}

impl From<Verdict> for RowVerdict {
    fn from(v: Verdict) -> Self {
        match v {
            Verdict::Holds => RowVerdict::Holds,
            Verdict::Violated => RowVerdict::Violated,
            Verdict::Inconclusive => RowVerdict::Inconclusive,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub quantity: String,
    pub paper_ref: String,
    pub estimate: f64,
    pub std_error: f64,
    pub reference: Option<f64>,
    pub verdict: RowVerdict,
}

impl Row {
    pub fn info(quantity: impl Into<String>, paper_ref: &str, estimate: f64, std_error: f64) -> Self {
        Self { quantity: quantity.into(), paper_ref: paper_ref.into(), estimate, std_error, reference: None, verdict: RowVerdict::Info }
    }

    /// Passes when `|value - reference| <= tol * max(1, |reference|)`.
    pub fn exact(quantity: impl Into<String>, paper_ref: &str, value: f64, reference: f64, tol: f64) -> Self {
        let ok = (value - reference).abs() <= tol * reference.abs().max(1.0);
        Self {
            quantity: quantity.into(),
            paper_ref: paper_ref.into(),
            estimate: value,
            std_error: 0.0,
            reference: Some(reference),
            verdict: if ok { RowVerdict::Pass } else { RowVerdict::Fail },
        }
    }

    /// Passes when the estimate lies within `k` standard errors of `reference`.
    pub fn within(quantity: impl Into<String>, paper_ref: &str, est: &MCEstimate, reference: f64, k: f64) -> Self {
        Self {
            quantity: quantity.into(),
            paper_ref: paper_ref.into(),
            estimate: est.value,
            std_error: est.std_error,
            reference: Some(reference),
            verdict: if est.within(reference, k) { RowVerdict::Pass } else { RowVerdict::Fail },
        }
    }

    pub fn check(quantity: impl Into<String>, paper_ref: &str, estimate: f64, std_error: f64, reference: f64, ok: bool) -> Self {
        Self {
            quantity: quantity.into(),
            paper_ref: paper_ref.into(),
            estimate,
            std_error,
            reference: Some(reference),
            verdict: if ok { RowVerdict::Pass } else { RowVerdict::Fail },
        }
    }

    /// Left-hand side against right-hand side; log-domain reports keep
    /// their logarithms and say so in the quantity.
    pub fn inequality(paper_ref: &str, r: &InequalityReport) -> Self {
        let quantity = if r.lhs.log_domain { format!("ln: {}", r.name) } else { r.name.clone() };
        Self {
            quantity,
            paper_ref: paper_ref.into(),
            estimate: r.lhs.value,
            std_error: r.lhs.std_error,
            reference: Some(r.rhs.value()),
            verdict: r.verdict.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub rows: Vec<Row>,
}

fn float(x: f64) -> String {
    format!("{x:.16e}")
}

impl ExperimentReport {
    /// 0 when every row holds or passes, 2 on any violation or failure,
    /// 3 when something is inconclusive.
    pub fn exit_code(&self) -> i32 {
        let v = |f: &dyn Fn(RowVerdict) -> bool| self.rows.iter().any(|r| f(r.verdict));
        if v(&|r| matches!(r, RowVerdict::Violated | RowVerdict::Fail)) {
            2
        } else if v(&|r| r == RowVerdict::Inconclusive) {
            3
        } else {
            0
        }
    }

    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(CSV_HEADER)?;
        for r in &self.rows {
            let reference = r.reference.map(float).unwrap_or_default();
            w.write_record([
                r.quantity.as_str(),
                r.paper_ref.as_str(),
                &float(r.estimate),
                &float(r.std_error),
                &reference,
                r.verdict.as_str(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn summary_table(&self) -> String {
        let width = self.rows.iter().map(|r| r.quantity.chars().count()).max().unwrap_or(8).min(90);
        let mut s = format!("{}  (seed {}, N = {})\n", self.config.experiment, self.config.seed, self.config.n);
        for r in &self.rows {
            let mut q: String = r.quantity.chars().take(width).collect();
            if r.quantity.chars().count() > width {
                q.pop();
                q.push('~');
            }
            let reference = r.reference.map(|x| format!("{x:.6e}")).unwrap_or_else(|| "-".into());
            s.push_str(&format!(
                "  {q:<width$}  {:>14.6e} +- {:<11.3e} ref {:<14}  {}\n",
                r.estimate,
                r.std_error,
                reference,
                r.verdict.as_str()
            ));
        }
        s
    }
}
