//! Statistical checks of the Gronwall and Bihari–LaSalle inequalities on
//! batches of paths.

use serde::{Deserialize, Serialize};

use super::estimate::{estimate_mean_ln, estimate_norm_ln, estimate_quasinorm_ln, mean_estimate, MCEstimate};
use super::report::{InequalityReport, Rhs};
use crate::bounds::{sampled_convex, sharp_constants, BoundTransform, EtaSpec, PExponent};
use crate::error::{domain, Error, Result};
use crate::sim::{map_paths, AssumptionTag, PathBatch, SimPath};

const CONVEXITY_SPAN: f64 = 1e6;
const CONVEXITY_POINTS: usize = 600;

/// Which hypothesis on `H` or `M` the bound is used under.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundVariant {
    /// `E[H_T^p] < inf` and `H` predictable: `alpha1 alpha2 ||H_T||_p`.
    PredictableH,
    /// `E[H_T^p] < inf` and `dM >= 0`: `alpha1 alpha2 ||H_T||_p`.
    NonnegJumps,
    /// `E[H_T] < inf`: `alpha1 E[H_T]`.
    L1H,
}

impl BoundVariant {
    pub const ALL: [BoundVariant; 3] = [BoundVariant::PredictableH, BoundVariant::NonnegJumps, BoundVariant::L1H];

    pub fn name(self) -> &'static str {
        match self {
            BoundVariant::PredictableH => "predictable-H",
            BoundVariant::NonnegJumps => "nonneg-jumps",
            BoundVariant::L1H => "L1-H",
        }
    }
}

fn require_tag<B: PathBatch + ?Sized>(batch: &B, required: AssumptionTag) -> Result<()> {
    let found = batch.tag();
    if found.implies(required) {
        Ok(())
    } else {
        Err(Error::WrongAssumption { required: required.name(), found: found.name() })
    }
}

fn collect<B, T, F>(batch: &B, f: F) -> Result<Vec<T>>
where
    B: PathBatch + ?Sized,
    T: Send,
    F: Fn(&SimPath) -> Result<T> + Sync + Send,
{
    map_paths(batch, f)?.into_iter().collect()
}

/// `ln` of the right-hand side for `variant`, from the terminal values `H_T`.
fn rhs_ln(h: &[f64], p: PExponent, variant: BoundVariant) -> Result<MCEstimate> {
    let c = sharp_constants(p);
    let logs: Vec<f64> = h.iter().map(|h| h.ln()).collect();
    Ok(match variant {
        BoundVariant::PredictableH | BoundVariant::NonnegJumps => estimate_quasinorm_ln(&logs, p)?.scale(c.alpha12),
        BoundVariant::L1H => estimate_mean_ln(&logs)?.scale(c.alpha1),
    })
}

fn rhs_name(variant: BoundVariant) -> &'static str {
    match variant {
        BoundVariant::PredictableH | BoundVariant::NonnegJumps => "alpha1 alpha2 ||H_T||_p",
        BoundVariant::L1H => "alpha1 E[H_T]",
    }
}

/// `||e^{-beta A_T} X*_T||_p <= rhs(variant)` under `A_sup` with `eta(x) = x`.
pub fn check_gronwall_sup<B: PathBatch + ?Sized>(batch: &B, p: PExponent, variant: BoundVariant) -> Result<InequalityReport> {
    let t = BoundTransform::with_default_reference(EtaSpec::linear());
    let mut r = bihari_report(batch, &t, p, true, variant)?;
    r.name = format!("||e^(-beta A_T) X*_T||_p <= {} [{}]", rhs_name(variant), variant.name());
    Ok(r)
}

/// `||e^{-A_T} X*_T||_p <= rhs(variant)` under `A_nosup` with `eta(x) = x`.
pub fn check_gronwall_nosup<B: PathBatch + ?Sized>(batch: &B, p: PExponent, variant: BoundVariant) -> Result<InequalityReport> {
    require_tag(batch, AssumptionTag::NoSup)?;
    let rows = collect(batch, |path| Ok((path.ln_x_sup_end() - path.a_end(), path.h_end())))?;
    let lhs_logs: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let h: Vec<f64> = rows.iter().map(|r| r.1).collect();
    let lhs = estimate_quasinorm_ln(&lhs_logs, p)?;
    let rhs = rhs_ln(&h, p, variant)?;
    Ok(InequalityReport::judge(
        format!("||e^(-A_T) X*_T||_p <= {} [{}]", rhs_name(variant), variant.name()),
        lhs,
        Rhs::Estimated(rhs),
    ))
}

/// Mixed-norm form for `0 < q < p`: `||X*_T||_q <= rhs(variant) ||e^{k A_T}||_r`
/// with `r = qp/(p-q)` and `k = beta` under `A_sup`, `k = 1` under `A_nosup`.
/// An infinite or non-finite estimate of the exponential norm makes the
/// report inconclusive.
pub fn check_gronwall_mixed<B: PathBatch + ?Sized>(
    batch: &B,
    p: PExponent,
    q: f64,
    variant: BoundVariant,
    with_sup: bool,
) -> Result<InequalityReport> {
    if !(q > 0.0 && q < p.get()) {
        return Err(domain("q", q, "must lie in (0, p)"));
    }
    require_tag(batch, if with_sup { AssumptionTag::Sup } else { AssumptionTag::NoSup })?;
    let c = sharp_constants(p);
    let k = if with_sup { c.beta } else { 1.0 };
    let r = q * p.get() / (p.get() - q);
    let rows = collect(batch, |path| Ok((path.ln_x_sup_end(), path.a_end(), path.h_end())))?;
    let x_logs: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let a_logs: Vec<f64> = rows.iter().map(|r| k * r.1).collect();
    let h: Vec<f64> = rows.iter().map(|r| r.2).collect();
    let lhs = estimate_norm_ln(&x_logs, q, None)?;
    let h_part = rhs_ln(&h, p, variant)?;
    let a_part = estimate_norm_ln(&a_logs, r, None)?;
    let rhs = MCEstimate {
        value: h_part.value + a_part.value,
        std_error: h_part.std_error.hypot(a_part.std_error),
        ..h_part
    };
    let damping = if with_sup { "beta A_T" } else { "A_T" };
    let report = InequalityReport::judge(
        format!("||X*_T||_q <= {} ||e^({damping})||_(qp/(p-q)) [{}]", rhs_name(variant), variant.name()),
        lhs,
        Rhs::Estimated(rhs),
    );
    if !rhs.value.is_finite() || !rhs.std_error.is_finite() {
        return Ok(report.inconclusive("exponential moment of A_T is not finite on the sample"));
    }
    Ok(report)
}

fn ensure_convex(t: &BoundTransform, p: PExponent, with_sup: bool) -> Result<()> {
    let eta = t.eta();
    if with_sup {
        let pv = p.get();
        let floor = eta.c0().powf(pv);
        let eta_p = |x: f64| {
            let y = x.powf(1.0 / pv);
            pv / (1.0 - pv) * eta.eval(y) * x / y
        };
        if !sampled_convex(&eta_p, floor, CONVEXITY_SPAN, CONVEXITY_POINTS) {
            return Err(Error::NotConvex(format!("eta_p for eta = {} and p = {pv} is not convex on the sampled grid", eta.label())));
        }
        let near = floor + 1e-12 * floor.max(1.0);
        let at_floor = eta_p(near);
        if !(at_floor.abs() <= 1e-6 * eta_p(floor + floor.max(1.0)).abs().max(1e-300)) {
            return Err(Error::NotConvex(format!("eta_p({near}) = {at_floor} does not vanish at c0^p")));
        }
    } else {
        let shape = eta.shape();
        if !shape.convex {
            return Err(Error::NotConvex(format!("eta = {} is not flagged convex", eta.label())));
        }
        if !shape.zero_at_floor {
            return Err(Error::NotConvex(format!("eta = {} is not zero at c0", eta.label())));
        }
    }
    Ok(())
}

/// `ln G^-1(G(X*_T) - beta A_T)` per path.
fn damped_sup_ln(t: &BoundTransform, path: &SimPath, beta: f64) -> Result<f64> {
    t.damped_ln(path.ln_x_sup_end().max(t.c0().ln()), path.a_end(), beta)
}

/// `ln sup_t G^-1(G(X_t) - A_t)` per path.
fn sup_damped_ln(t: &BoundTransform, path: &SimPath) -> Result<f64> {
    let floor = t.c0().ln();
    let mut best = f64::NEG_INFINITY;
    for i in 0..path.len() {
        best = best.max(t.damped_ln(path.ln_x(i).max(floor), path.a[i], 1.0)?);
    }
    Ok(best)
}

fn bihari_report<B: PathBatch + ?Sized>(
    batch: &B,
    t: &BoundTransform,
    p: PExponent,
    with_sup: bool,
    variant: BoundVariant,
) -> Result<InequalityReport> {
    require_tag(batch, if with_sup { AssumptionTag::Sup } else { AssumptionTag::NoSup })?;
    ensure_convex(t, p, with_sup)?;
    let beta = sharp_constants(p).beta;
    let rows = collect(batch, |path| {
        let l = if with_sup { damped_sup_ln(t, path, beta)? } else { sup_damped_ln(t, path)? };
        Ok((l, path.h_end()))
    })?;
    let lhs_logs: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let h: Vec<f64> = rows.iter().map(|r| r.1).collect();
    let lhs = estimate_quasinorm_ln(&lhs_logs, p)?;
    let rhs = rhs_ln(&h, p, variant)?;
    let form = if with_sup { "G^-1(G(X*_T) - beta A_T)" } else { "sup_t G^-1(G(X_t) - A_t)" };
    Ok(InequalityReport::judge(
        format!("||{form}||_p <= {} [{}, eta = {}]", rhs_name(variant), variant.name(), t.eta().label()),
        lhs,
        Rhs::Estimated(rhs),
    ))
}

/// The Bihari–LaSalle bound for convex `eta`. With `with_sup` the paths
/// must satisfy `A_sup` and `eta_p` must be convex and vanish at `c0^p`;
/// otherwise `A_nosup` with `eta` convex and `eta(c0) = 0`.
pub fn check_bihari_convex<B: PathBatch + ?Sized>(
    batch: &B,
    t: &BoundTransform,
    p: PExponent,
    with_sup: bool,
    variant: BoundVariant,
) -> Result<InequalityReport> {
    bihari_report(batch, t, p, with_sup, variant)
}

/// `P[sup X > u] <= E[H_T ^ w] / G^-1(G(u) - R) + P[H_T >= w] + P[A_T > R]`
/// under `A_nosup`. When `G(u) - R` leaves the range of `G` the right-hand
/// side is replaced by the trivial bound 1.
pub fn check_tail_bound<B: PathBatch + ?Sized>(batch: &B, t: &BoundTransform, u: f64, w: f64, r: f64) -> Result<InequalityReport> {
    require_tag(batch, AssumptionTag::NoSup)?;
    if !(u > t.c0()) {
        return Err(domain("u", u, "level must exceed c0"));
    }
    if !(w > 0.0) {
        return Err(domain("w", w, "truncation must be positive"));
    }
    if !(r > 0.0) {
        return Err(domain("R", r, "must be positive"));
    }
    let ln_u = u.ln();
    let rows = collect(batch, |path| Ok((path.ln_x_sup_end() > ln_u, path.h_end(), path.a_end())))?;
    let hit: Vec<f64> = rows.iter().map(|r| if r.0 { 1.0 } else { 0.0 }).collect();
    let lhs = mean_estimate(&hit)?;
    let name = format!("P[sup X > {u}] <= E[H ^ w]/G^-1(G(u) - R) + P[H >= w] + P[A > R]");

    let (lo, _) = t.range();
    let shifted = t.g(u)? - r;
    let denom = if shifted > lo { t.g_inv(shifted).ok() } else { None };
    let Some(denom) = denom.filter(|d| *d > 0.0) else {
        return Ok(InequalityReport::judge(name, lhs, Rhs::Exact(1.0)).with_diagnostic("G(u) - R is below the range of G"));
    };
    let terms: Vec<f64> = rows
        .iter()
        .map(|&(_, h, a)| h.min(w) / denom + if h >= w { 1.0 } else { 0.0 } + if a > r { 1.0 } else { 0.0 })
        .collect();
    let rhs = mean_estimate(&terms)?;
    Ok(InequalityReport::judge(name, lhs, Rhs::Estimated(rhs)))
}
