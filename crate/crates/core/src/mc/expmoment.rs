//! Exponential moments of path-dependent SDEs and an audit of the
//! Lyapunov-type coefficient condition along simulated paths.

use serde::{Deserialize, Serialize};

use super::estimate::estimate_quasinorm_ln;
use super::report::{InequalityReport, Rhs};
use crate::bounds::{sharp_constants, EtaSpec, PExponent};
use crate::error::{domain, Result};
use crate::rng::RngStream;
use crate::sim::em::{euler_maruyama_with, Decomposition, PathSdeSpec, ScalarField, StepInfo};
use crate::sim::{par_samples, AssumptionTag};

const SEGMENT_SAMPLES: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpMomentConfig {
    pub gamma: f64,
    pub kappa: f64,
    pub p: PExponent,
    pub t_end: f64,
    pub n: usize,
    pub dt: f64,
    pub audit: bool,
}

/// Worst point of one audited inequality.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditWorst {
    /// `lhs - gamma (sup U + kappa)`
    pub residual: f64,
    pub t: f64,
    pub state: Vec<f64>,
    /// Smallest `gamma` making the inequality hold at every audited step.
    pub min_gamma: f64,
}

impl AuditWorst {
    fn empty() -> Self {
        Self { residual: f64::NEG_INFINITY, t: 0.0, state: vec![], min_gamma: 0.0 }
    }

    fn update(&mut self, lhs: f64, bound: f64, sup_u: f64, kappa: f64, t: f64, x: &[f64]) {
        let r = lhs - bound;
        if r > self.residual {
            self.residual = r;
            self.t = t;
            self.state = x.to_vec();
        }
        let denom = sup_u + kappa;
        let need = if denom > 0.0 { lhs / denom } else if lhs > 0.0 { f64::INFINITY } else { 0.0 };
        self.min_gamma = self.min_gamma.max(need);
    }

    fn merge(self, other: Self) -> Self {
        let min_gamma = self.min_gamma.max(other.min_gamma);
        let mut best = if other.residual > self.residual { other } else { self };
        best.min_gamma = min_gamma;
        best
    }
}

/// Sampled audit of `G U + |DU g|^2 / 2 <= gamma sup U + gamma kappa` and of
/// the split form that bounds `G U` and `|DU g|^2 / 2` separately.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub steps: usize,
    pub combined: AuditWorst,
    pub split: AuditWorst,
    pub combined_ok: bool,
    pub split_ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpMomentOutcome {
    pub report: InequalityReport,
    pub audit: Option<AuditReport>,
}

fn audit_tolerance(bound: f64) -> f64 {
    1e-9 * (1.0 + bound.abs())
}

struct StepAudit {
    steps: usize,
    combined: AuditWorst,
    split: AuditWorst,
    combined_ok: bool,
    split_ok: bool,
}

fn generator_terms(u: &ScalarField, info: &StepInfo, grad: &mut [f64], hess: &mut [f64]) -> (f64, f64) {
    let x = info.view.x;
    let t = info.view.t;
    let (d, m) = (x.len(), info.g.len() / x.len());
    u.grad(t, x, grad);
    u.hess(t, x, hess);
    let mut gu = u.time_derivative(t, x) + grad.iter().zip(info.f).map(|(a, b)| a * b).sum::<f64>();
    let mut q = 0.0;
    for k in 0..m {
        let mut dg = 0.0;
        for j in 0..d {
            dg += grad[j] * info.g[j * m + k];
            for l in 0..d {
                gu += 0.5 * info.g[j * m + k] * hess[j * d + l] * info.g[l * m + k];
            }
        }
        q += 0.5 * dg * dg;
    }
    (gu, q)
}

fn initial_sup_u(spec: &PathSdeSpec, u: &ScalarField) -> f64 {
    let init = spec.initial();
    let lag = spec.memory();
    let mut buf = vec![0.0; spec.dim()];
    let n = if lag > 0.0 { SEGMENT_SAMPLES } else { 0 };
    (0..=n)
        .map(|i| {
            let s = if n == 0 { 0.0 } else { -lag + lag * i as f64 / n as f64 };
            init.value(s, &mut buf);
            u.value(s.max(0.0), &buf)
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

/// `||sup_t exp(U(t, X_t) e^{-gamma beta T})||_p <= alpha1 alpha2 exp(U(0, X_0) + (kappa + U_0)(1 - e^{-gamma beta T}))`.
///
/// With `audit` set every Euler step evaluates the coefficient condition;
/// a violation makes the verdict inconclusive.
pub fn check_exponential_moment(
    spec: &PathSdeSpec,
    u: &ScalarField,
    cfg: &ExpMomentConfig,
    base: RngStream,
) -> Result<ExpMomentOutcome> {
    if !(cfg.gamma >= 0.0) {
        return Err(domain("gamma", cfg.gamma, "must be nonnegative"));
    }
    if !(cfg.kappa >= 0.0) {
        return Err(domain("kappa", cfg.kappa, "must be nonnegative"));
    }
    if !(cfg.t_end > 0.0) {
        return Err(domain("T", cfg.t_end, "horizon must be positive"));
    }
    let c = sharp_constants(cfg.p);
    let decay = (-cfg.gamma * c.beta * cfg.t_end).exp();
    let spec = spec
        .clone()
        .with_decomposition(Decomposition::new(u.clone(), EtaSpec::linear(), AssumptionTag::NoSup).with_constant_rate(cfg.gamma))?;
    let u0_sup = initial_sup_u(&spec, u);
    let (gamma, kappa) = (cfg.gamma, cfg.kappa);

    let runs = par_samples(cfg.n, base, |s| -> Result<(f64, Option<StepAudit>)> {
        let mut rng = s.rng();
        if !cfg.audit {
            let path = euler_maruyama_with(&spec, cfg.t_end, cfg.dt, &mut rng, None)?;
            return Ok((path.x_sup_end() * decay, None));
        }
        let d = spec.dim();
        let (mut grad, mut hess) = (vec![0.0; d], vec![0.0; d * d]);
        let mut sup_u = u0_sup;
        let mut audit = StepAudit {
            steps: 0,
            combined: AuditWorst::empty(),
            split: AuditWorst::empty(),
            combined_ok: true,
            split_ok: true,
        };
        let mut obs = |info: &StepInfo| {
            let t = info.view.t;
            sup_u = sup_u.max(u.value(t, info.view.x));
            let (gu, q) = generator_terms(u, info, &mut grad, &mut hess);
            let bound = gamma * (sup_u + kappa);
            let tol = audit_tolerance(bound);
            audit.combined.update(gu + q, bound, sup_u, kappa, t, info.view.x);
            audit.split.update(gu.max(q), bound, sup_u, kappa, t, info.view.x);
            audit.combined_ok &= gu + q <= bound + tol;
            audit.split_ok &= gu.max(q) <= bound + tol;
            audit.steps += 1;
        };
        let path = euler_maruyama_with(&spec, cfg.t_end, cfg.dt, &mut rng, Some(&mut obs))?;
        Ok((path.x_sup_end() * decay, Some(audit)))
    });

    let mut lhs_logs = Vec::with_capacity(cfg.n);
    let mut merged: Option<StepAudit> = None;
    for run in runs {
        let (l, a) = run?;
        lhs_logs.push(l);
        if let Some(a) = a {
            merged = Some(match merged {
                None => a,
                Some(m) => StepAudit {
                    steps: m.steps + a.steps,
                    combined: m.combined.merge(a.combined),
                    split: m.split.merge(a.split),
                    combined_ok: m.combined_ok && a.combined_ok,
                    split_ok: m.split_ok && a.split_ok,
                },
            });
        }
    }
    let lhs = estimate_quasinorm_ln(&lhs_logs, cfg.p)?;
    let mut x0 = vec![0.0; spec.dim()];
    spec.initial().value(0.0, &mut x0);
    let rhs_ln = c.alpha12.ln() + u.value(0.0, &x0) + (cfg.kappa + u0_sup) * (1.0 - decay);
    let mut report = InequalityReport::judge(
        format!("||sup_t exp(U e^(-gamma beta T))||_p <= alpha1 alpha2 exp(U(0,x0) + (kappa + U0)(1 - e^(-gamma beta T))) [U = {}]", u.label()),
        lhs,
        Rhs::Exact(rhs_ln),
    );
    let audit = merged.map(|a| AuditReport {
        steps: a.steps,
        combined: a.combined,
        split: a.split,
        combined_ok: a.combined_ok,
        split_ok: a.split_ok,
    });
    if let Some(a) = &audit {
        if !a.combined_ok {
            report = report.inconclusive(format!(
                "coefficient condition fails: residual {} at t = {}, x = {:?}; smallest admissible gamma {}",
                a.combined.residual, a.combined.t, a.combined.state, a.combined.min_gamma
            ));
        }
    }
    Ok(ExpMomentOutcome { report, audit })
}

/// `gamma = 2 gamma1 + 2 R gamma2` and `kappa = R gamma2 / gamma` for
/// `U = R |x|^2` under `<x, f> <= gamma1 sup |x|^2` and `|g|_F^2 <= gamma2`.
pub fn squared_norm_constants(r: f64, gamma1: f64, gamma2: f64) -> (f64, f64) {
    let gamma = 2.0 * gamma1 + 2.0 * r * gamma2;
    let kappa = if gamma > 0.0 { r * gamma2 / gamma } else { 0.0 };
    (gamma, kappa)
}
