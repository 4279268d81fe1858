//! Empirical checks of Lenglart domination and its two consequences.

use serde::{Deserialize, Serialize};

use super::estimate::{estimate_norm_ln, estimate_quasinorm_ln, mean_estimate, MCEstimate};
use super::report::{InequalityReport, Rhs};
use crate::bounds::{sharp_constants, PExponent};
use crate::error::{domain, Result};
use crate::rng::RngStream;
use crate::sim::exact::{alpha_sup_x_moment, simulate_alpha_sharpness_weighted};
use crate::sim::{map_paths, par_samples, PathBatch, SimPath};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LenglartConfig {
    pub p: PExponent,
    /// Deterministic stopping times, evenly spaced on `(0, T]`.
    pub times: usize,
    /// First-passage levels, log-spaced between the 10% and 90% quantiles of `X*_T`.
    pub levels: usize,
    /// Level of the tail inequality; the median of `X*_T` when absent.
    pub u: Option<f64>,
    /// `lambda` of the tail inequality; `p` when absent.
    pub lambda: Option<f64>,
}

impl LenglartConfig {
    pub fn new(p: PExponent) -> Self {
        Self { p, times: 8, levels: 8, u: None, lambda: None }
    }
}

/// `lambda^-p (lambda/(1-p) + 1)`, the integrated tail constant; minimal at
/// `lambda = p` with value `(alpha1 alpha2)^p`.
pub fn lenglart_integrated_constant(p: PExponent, lambda: f64) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(domain("lambda", lambda, "must be positive"));
    }
    let p = p.get();
    Ok(lambda.powf(-p) * (lambda / (1.0 - p) + 1.0))
}

fn quantile(sorted: &[f64], q: f64) -> f64 {
    let i = ((sorted.len() - 1) as f64 * q).round() as usize;
    sorted[i]
}

/// Index of the stopping time: first grid point with `X >= level`, else the end.
fn first_passage(path: &SimPath, level: f64) -> usize {
    path.x.iter().position(|&x| x >= level).unwrap_or(path.len() - 1)
}

/// `E[X_tau] <= E[H_tau]` for deterministic and first-passage times, the
/// tail inequality `u P[X* > u] <= lambda E[(H/lambda) ^ u] + u P[H/lambda >= u]`
/// and the maximal inequality `||X*_T||_p <= alpha1 alpha2 ||H_T||_p`.
pub fn check_lenglart_domination<B: PathBatch + ?Sized>(batch: &B, cfg: &LenglartConfig) -> Result<Vec<InequalityReport>> {
    let paths = map_paths(batch, |p| p.clone())?;
    let n = paths.len();
    let mut sup_end: Vec<f64> = paths.iter().map(|p| p.x_sup_end()).collect();
    sup_end.sort_by(f64::total_cmp);
    let mut reports = Vec::new();

    let t_end = paths.iter().map(|p| p.t_end()).fold(0.0, f64::max);
    for j in 1..=cfg.times {
        let t = t_end * j as f64 / cfg.times as f64;
        let diff: Vec<f64> = paths
            .iter()
            .map(|p| {
                let i = p.index_at(t);
                p.x[i] - p.h[i]
            })
            .collect();
        let lhs = mean_estimate(&diff)?;
        reports.push(InequalityReport::judge(format!("E[X_t - H_t] <= 0 at t = {t}"), lhs, Rhs::Exact(0.0)));
    }

    let lo = quantile(&sup_end, 0.1);
    let hi = quantile(&sup_end, 0.9);
    if lo > 0.0 && hi > lo {
        for j in 0..cfg.levels {
            let level = if cfg.levels == 1 { lo } else { lo * (hi / lo).powf(j as f64 / (cfg.levels - 1) as f64) };
            let diff: Vec<f64> = paths
                .iter()
                .map(|p| {
                    let i = first_passage(p, level);
                    p.x[i] - p.h[i]
                })
                .collect();
            let lhs = mean_estimate(&diff)?;
            reports.push(InequalityReport::judge(
                format!("E[X_tau - H_tau] <= 0 for first passage over {level}"),
                lhs,
                Rhs::Exact(0.0),
            ));
        }
    }

    let lambda = cfg.lambda.unwrap_or(cfg.p.get());
    if !(lambda > 0.0) {
        return Err(domain("lambda", lambda, "must be positive"));
    }
    let u = cfg.u.unwrap_or_else(|| quantile(&sup_end, 0.5));
    if u > 0.0 {
        let terms: Vec<f64> = paths
            .iter()
            .map(|p| {
                let z = p.h_end() / lambda;
                let hit = if p.x_sup_end() > u { u } else { 0.0 };
                hit - lambda * z.min(u) - if z >= u { u } else { 0.0 }
            })
            .collect();
        let lhs = mean_estimate(&terms)?;
        reports.push(InequalityReport::judge(
            format!("u P[X* > u] - lambda E[(H/lambda) ^ u] - u P[H/lambda >= u] <= 0 at u = {u}, lambda = {lambda}"),
            lhs,
            Rhs::Exact(0.0),
        ));
    }

    let x_logs: Vec<f64> = sup_end.iter().map(|x| x.ln()).collect();
    let h_logs: Vec<f64> = paths.iter().map(|p| p.h_end().ln()).collect();
    let lhs = estimate_quasinorm_ln(&x_logs, cfg.p)?;
    let rhs = estimate_quasinorm_ln(&h_logs, cfg.p)?.scale(sharp_constants(cfg.p).alpha12);
    reports.push(InequalityReport::judge("||X*_T||_p <= alpha1 alpha2 ||H_T||_p", lhs, Rhs::Estimated(rhs)));
    debug_assert!(reports.iter().all(|r| r.lhs.n == n));
    Ok(reports)
}

/// `||sup X||_p / ||sup H||_p` for the single-jump construction, estimated
/// with importance sampling of the jump time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlphaRatio {
    /// `ln ||sup X||_p`
    pub sup_x: MCEstimate,
    /// `ln ||sup H||_p`
    pub sup_h: MCEstimate,
    pub ratio: f64,
    pub ratio_se: f64,
    /// `E[(sup X)^p]`, estimated on the linear scale.
    pub sup_x_moment: MCEstimate,
    /// `n / (1 - p)`
    pub sup_x_moment_exact: f64,
}

pub fn alpha_sharpness_ratio(n_jump: u32, p: PExponent, samples: usize, base: RngStream) -> Result<AlphaRatio> {
    let draws = par_samples(samples, base, |s| simulate_alpha_sharpness_weighted(n_jump, p, &mut s.rng()));
    let draws: Vec<_> = draws.into_iter().collect::<Result<_>>()?;
    let w: Vec<f64> = draws.iter().map(|d| d.ln_weight).collect();
    let lx: Vec<f64> = draws.iter().map(|d| d.ln_sup_x).collect();
    let lh: Vec<f64> = draws.iter().map(|d| d.ln_sup_h).collect();
    let sup_x = estimate_norm_ln(&lx, p.get(), Some(&w))?;
    let sup_h = estimate_norm_ln(&lh, p.get(), Some(&w))?;
    let ratio = (sup_x.value - sup_h.value).exp();
    let ratio_se = ratio * sup_x.std_error.hypot(sup_h.std_error);
    let pv = p.get();
    let moment = (pv * sup_x.value).exp();
    let sup_x_moment = MCEstimate { value: moment, std_error: moment * pv * sup_x.std_error, log_domain: false, ..sup_x };
    Ok(AlphaRatio { sup_x, sup_h, ratio, ratio_se, sup_x_moment, sup_x_moment_exact: alpha_sup_x_moment(n_jump, p) })
}
