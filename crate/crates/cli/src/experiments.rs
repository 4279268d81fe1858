//! The registered experiments. Each returns its result rows.

use sgb_core::bounds::{sharp_constants, BoundTransform, EtaShape, EtaSpec, PExponent};
use sgb_core::deterministic::{bihari_bound, ode_comparison_oracle, DetProblem};
use sgb_core::mc::*;
use sgb_core::rng::uniform_open;
use sgb_core::sim::em::{sup_feedback_sde, sup_growth_sde, ScalarField};
use sgb_core::sim::*;
use sgb_core::RngStream;

use crate::config::ExperimentConfig;
use crate::registry::lookup;
use crate::report::{ExperimentReport, Row};

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Core(#[from] sgb_core::Error),
    #[error("unknown experiment `{0}`")]
    Unknown(String),
    #[error("`{0}` is too large")]
    TooLarge(&'static str),
}

type Rows = Result<Vec<Row>, RunError>;

const WEAK_L1_LEVELS: [f64; 4] = [10.0, 1e2, 1e3, 1e4];
const BETA_DELTAS: [f64; 6] = [0.5, 0.25, 0.1, 0.05, 0.02, 0.01];

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport, RunError> {
    let info = lookup(&cfg.experiment).ok_or_else(|| RunError::Unknown(cfg.experiment.clone()))?;
    let r = info.paper_ref;
    let rows = match info.name {
        "constants" => constants(cfg, r),
        "transforms" => transforms(cfg, r),
        "det-bihari" => det_bihari(cfg, r),
        "sharpness-blocks" => sharpness_blocks(cfg, r),
        "sharpness-beta" => sharpness_beta(cfg, r),
        "sharpness-alpha" => sharpness_alpha(cfg, r),
        "weak-l1" => weak_l1(cfg, r),
        "gronwall-nosup" => gronwall_nosup(cfg, r),
        "gronwall-sup" => gronwall_sup(cfg, r),
        "bihari-convex" => bihari_convex(cfg, r),
        "tail-bound" => tail_bound(cfg, r),
        "lenglart" => lenglart(cfg, r),
        "exp-clock" => exp_clock(cfg, r),
        "convex-counterexample" => convex_counterexample(cfg, r),
        "exp-moments" => exp_moments(cfg, r),
        "sqrt-shift-tail" => sqrt_shift_tail(cfg, r),
        other => return Err(RunError::Unknown(other.to_string())),
    }?;
    Ok(ExperimentReport { config: cfg.clone(), rows })
}

fn pexp(cfg: &ExperimentConfig) -> Result<PExponent, RunError> {
    Ok(PExponent::new(cfg.real("p"))?)
}

fn small(cfg: &ExperimentConfig, key: &'static str) -> Result<u32, RunError> {
    u32::try_from(cfg.int(key)).map_err(|_| RunError::TooLarge(key))
}

/// Stream block `j` of the configured seed.
fn stream(cfg: &ExperimentConfig, j: u64) -> RngStream {
    RngStream::new(cfg.seed, j << 40)
}

fn blocks(cfg: &ExperimentConfig) -> Result<BlockParams, RunError> {
    Ok(BlockParams::new(cfg.real("eps"), cfg.real("delta"), small(cfg, "k")?)?)
}

fn constants(cfg: &ExperimentConfig, r: &str) -> Rows {
    let p = pexp(cfg)?;
    let c = sharp_constants(p);
    let pv = p.get();
    let (beta, alpha1, alpha2) = (1.0 / (1.0 - pv), (1.0 - pv).powf(-1.0 / pv), 1.0 / pv);
    Ok(vec![
        Row::exact("beta", r, c.beta, beta, 1e-13),
        Row::exact("alpha1", r, c.alpha1, alpha1, 1e-12),
        Row::exact("alpha2", r, c.alpha2, alpha2, 1e-13),
        Row::exact("alpha1 alpha2", r, c.alpha12, alpha1 * alpha2, 1e-12),
    ])
}

/// Largest relative errors of the roundtrip, the `G~_p` identity and the
/// reference-point invariance for one rate function.
fn transform_errors(eta: &EtaSpec, p: PExponent) -> Result<[f64; 3], RunError> {
    let c0 = eta.c0();
    let t1 = BoundTransform::with_default_reference(eta.clone());
    let c2 = t1.c() + 2.5;
    let t2 = BoundTransform::new(eta.clone(), c2)?;
    let offset = t1.g(c2)?;
    let (mut roundtrip, mut tilde, mut invariance) = (0f64, 0f64, 0f64);
    for dx in [1e-3, 0.1, 1.0, 10.0, 1e3, 1e6] {
        let x = c0 + dx;
        roundtrip = roundtrip.max((t1.g_inv(t1.g(x)?)? - x).abs() / x);
        invariance = invariance.max((t1.g(x)? - t2.g(x)? - offset).abs() / offset.abs().max(1.0));
        for a in [0.1, 1.0] {
            let (d1, d2) = (t1.damped(x, a, 1.0)?, t2.damped(x, a, 1.0)?);
            invariance = invariance.max((d1 - d2).abs() / d1.max(1e-300));
        }
    }
    let floor = c0.powf(p.get());
    for dx in [0.01, 0.5, 3.0, 50.0] {
        let a = t1.tilde_g_p(p, floor + dx)?;
        let b = t1.tilde_g_p_direct(p, floor + dx)?;
        tilde = tilde.max((a - b).abs() / a.abs().max(1.0));
    }
    Ok([roundtrip, tilde, invariance])
}

fn transforms(cfg: &ExperimentConfig, r: &str) -> Rows {
    let p = pexp(cfg)?;
    let convex = EtaShape { convex: true, concave: false, zero_at_floor: true };
    let mut etas = EtaSpec::catalog();
    etas.push(EtaSpec::squared_gaussian_exponent(0.5)?);
    etas.push(EtaSpec::numeric("x atan x", 0.0, |x: f64| x * x.atan(), convex)?);
    let mut rows = Vec::new();
    for eta in &etas {
        let [roundtrip, tilde, invariance] = transform_errors(eta, p)?;
        let l = eta.label();
        rows.push(Row::check(format!("G^-1(G(x)) relative error, eta = {l}"), r, roundtrip, 0.0, 1e-9, roundtrip <= 1e-9));
        rows.push(Row::check(format!("G~_p identity error, eta = {l}"), r, tilde, 0.0, 1e-10, tilde <= 1e-10));
        rows.push(Row::check(format!("reference-point invariance error, eta = {l}"), r, invariance, 0.0, 1e-9, invariance <= 1e-9));
    }
    Ok(rows)
}

fn det_bihari(cfg: &ExperimentConfig, r: &str) -> Rows {
    let (h, t_end, dt) = (cfg.real("h"), cfg.real("t"), cfg.real("dt"));
    let steps = (t_end / dt).round().max(1.0) as usize;
    let convex = EtaShape { convex: true, concave: false, zero_at_floor: true };
    let square = EtaSpec::numeric("x^2", 0.0, |x: f64| x * x, convex)?;
    let bound = bihari_bound(&DetProblem::uniform(square.clone(), h, |t| t, t_end, steps)?);
    let ode = ode_comparison_oracle(&square, h, |_| 1.0, t_end, dt, 1e12)?;
    let shared = bound.bound.len().min(ode.x.len());
    let err = (0..shared).map(|i| (bound.bound[i] - ode.x[i]).abs() / ode.x[i]).fold(0f64, f64::max);
    let mut rows = vec![
        Row::check("eta = x^2: max relative gap between bound and RK4", r, err, 0.0, 1e-5, err <= 1e-5),
        Row::info("eta = x^2: last time before blow-up of the bound", r, bound.horizon, 0.0),
    ];
    if t_end < 1.0 / h {
        rows.push(Row::exact("eta = x^2: bound at T against 1/(1/H - T)", r, *bound.bound.last().unwrap(), 1.0 / (1.0 / h - t_end), 1e-9));
    }
    let lin = bihari_bound(&DetProblem::uniform(EtaSpec::linear(), h, |t| t, t_end, steps)?);
    let lin_err = lin.times.iter().zip(&lin.bound).map(|(t, b)| (b - h * t.exp()).abs() / (h * t.exp())).fold(0f64, f64::max);
    rows.push(Row::check("eta = x: max relative gap between bound and H e^t", r, lin_err, 0.0, 1e-9, lin_err <= 1e-9));
    Ok(rows)
}

fn sharpness_blocks(cfg: &ExperimentConfig, r: &str) -> Rows {
    let p = pexp(cfg)?;
    let bp = blocks(cfg)?;
    let traces = par_samples(cfg.n, stream(cfg, 0), |s| simulate_sharpness_blocks(&bp, &mut s.rng()).trace);
    let mut rows = Vec::new();
    for j in 0..=bp.k {
        let s: Vec<f64> = traces.iter().map(|t| t[j as usize]).collect();
        let est = estimate_moment(&s, p.get())?;
        let exact = block_moment(p, &BlockParams { k: j, ..bp });
        rows.push(Row::within(format!("E[(X*)^p] after {j} blocks"), r, &est, exact, 3.0));
    }
    Ok(rows)
}

fn sharpness_beta(cfg: &ExperimentConfig, r: &str) -> Rows {
    let p = pexp(cfg)?;
    let eps = cfg.real("eps");
    let beta = sharp_constants(p).beta;
    let mut rows = Vec::new();
    let mut prev = f64::NEG_INFINITY;
    for rate in beta_rate_scan(p, &BETA_DELTAS, eps)? {
        rows.push(Row::check(format!("rate(delta = {})", rate.delta), r, rate.rate, 0.0, beta, rate.rate < beta && rate.rate > prev));
        prev = rate.rate;
    }
    let delta = cfg.real("delta");
    let ks: Vec<u32> = (2..=small(cfg, "kmax")?).collect();
    let fit = fit_block_rate(p, delta, eps, &ks, cfg.n, stream(cfg, 0))?;
    let exact = block_rate(p, delta, eps)?;
    rows.push(Row::check(
        format!("fitted growth of ln ||X*||_p per unit time, delta = {delta}"),
        r,
        fit.slope,
        fit.slope_se,
        exact,
        (fit.slope - exact).abs() <= 3.0 * fit.slope_se,
    ));
    Ok(rows)
}

fn sharpness_alpha(cfg: &ExperimentConfig, r: &str) -> Rows {
    let p = pexp(cfg)?;
    let c = sharp_constants(p);
    let s0 = par_samples(cfg.n, stream(cfg, 0), |s| 1.0 / uniform_open(&mut s.rng()));
    let est = estimate_moment(&s0, p.get())?;
    let ratio = alpha_sharpness_ratio(small(cfg, "n-jump")?, p, cfg.n, stream(cfg, 1))?;
    Ok(vec![
        Row::within("E[S0^p]", r, &est, 1.0 / (1.0 - p.get()), 3.0),
        Row::check(
            "||sup X||_p / ||sup H||_p",
            r,
            ratio.ratio,
            ratio.ratio_se,
            c.alpha12,
            (ratio.ratio / c.alpha12 - 1.0).abs() < 0.05,
        ),
        Row::within("E[(sup X)^p] of the single-jump construction", r, &ratio.sup_x_moment, ratio.sup_x_moment_exact, 3.0),
    ])
}

fn profile_rows(samples: &[f64], label: &str, r: &str) -> Rows {
    let prof = tail_profile(samples, &WEAK_L1_LEVELS)?;
    let mut rows: Vec<Row> = prof.iter().map(|t| Row::info(format!("u P[{label} > u] at u = {}", t.u), r, t.value, t.std_error)).collect();
    let min_gap = prof
        .windows(2)
        .map(|w| (w[1].value - w[0].value) / w[0].std_error.hypot(w[1].std_error))
        .fold(f64::INFINITY, f64::min);
    rows.push(Row::check("smallest successive increase of the profile, in combined SE", r, min_gap, 0.0, 3.0, strictly_increasing(&prof, 3.0)));
    Ok(rows)
}

fn weak_l1(cfg: &ExperimentConfig, r: &str) -> Rows {
    let bp = blocks(cfg)?;
    let s = par_samples(cfg.n, stream(cfg, 0), |s| sample_block_sup(&bp, &mut s.rng()));
    profile_rows(&s, "S_k", r)
}

fn gronwall_nosup(cfg: &ExperimentConfig, r: &str) -> Rows {
    let p = pexp(cfg)?;
    let (mu, sigma, x0, t) = (cfg.real("mu"), cfg.real("sigma"), cfg.real("x0"), cfg.real("t"));
    let steps = cfg.int("steps") as usize;
    let paths: Vec<SimPath> =
        par_samples(cfg.n, stream(cfg, 0), |s| gbm_path(mu, sigma, x0, t, steps, &mut s.rng())).into_iter().collect::<Result<_, _>>()?;
    let mut rows = Vec::new();
    for v in BoundVariant::ALL {
        rows.push(Row::inequality(r, &check_gronwall_nosup(&paths, p, v)?));
    }
    rows.push(Row::inequality(r, &check_gronwall_mixed(&paths, p, cfg.real("q"), BoundVariant::PredictableH, false)?));
    Ok(rows)
}

fn gronwall_sup(cfg: &ExperimentConfig, r: &str) -> Rows {
    let p = pexp(cfg)?;
    let pv = p.get();
    let bp = blocks(cfg)?;
    let beta = sharp_constants(p).beta;
    let paths: Vec<SimPath> = par_samples(cfg.n, stream(cfg, 0), |s| sharpness_block_path(&bp, &mut s.rng()));
    let closed = ((-pv * beta * bp.horizon()).exp() * block_moment(p, &bp)).powf(1.0 / pv);
    let mut rows = Vec::new();
    for v in BoundVariant::ALL {
        let rep = check_gronwall_sup(&paths, p, v)?;
        if v == BoundVariant::PredictableH {
            rows.push(Row::within("||e^(-beta A_T) X*_T||_p against its closed form", r, &rep.lhs.linear(), closed, 4.0));
        }
        rows.push(Row::inequality(r, &rep));
    }
    rows.push(Row::inequality(r, &check_gronwall_mixed(&paths, p, cfg.real("q"), BoundVariant::PredictableH, true)?));
    Ok(rows)
}

fn convex_batch(cfg: &ExperimentConfig) -> GeneratedBatch<impl Fn(RngStream) -> sgb_core::Result<SimPath> + Sync> {
    let (gamma, x0, t, dt) = (cfg.real("gamma"), cfg.real("x0"), cfg.real("t"), cfg.real("dt"));
    GeneratedBatch::new(cfg.n, stream(cfg, 0), AssumptionTag::NoSup, move |s| simulate_convex_counterexample(gamma, x0, t, dt, &mut s.rng()))
}

fn bihari_convex(cfg: &ExperimentConfig, r: &str) -> Rows {
    let p = pexp(cfg)?;
    let t = BoundTransform::with_default_reference(EtaSpec::squared_gaussian_exponent(cfg.real("gamma"))?);
    let batch = convex_batch(cfg);
    let mut rows = Vec::new();
    for (with_sup, v) in [(false, BoundVariant::PredictableH), (false, BoundVariant::L1H), (true, BoundVariant::PredictableH)] {
        let mut rep = check_bihari_convex(&batch, &t, p, with_sup, v)?;
        rep.name = format!("{} ({}, {})", rep.name, if with_sup { "with sup" } else { "without sup" }, v.name());
        rows.push(Row::inequality(r, &rep));
    }
    Ok(rows)
}

fn tail_bound(cfg: &ExperimentConfig, r: &str) -> Rows {
    let t = BoundTransform::with_default_reference(EtaSpec::squared_gaussian_exponent(cfg.real("gamma"))?);
    let (u, w, big_r) = (cfg.real("u"), cfg.real("w"), cfg.real("r"));
    let rep = check_tail_bound(&convex_batch(cfg), &t, u, w, big_r)?;
    let lin = BoundTransform::with_default_reference(EtaSpec::linear());
    let denom = lin.g_inv(lin.g(u)? - big_r)?;
    Ok(vec![
        Row::inequality(r, &rep),
        Row::exact("eta = x: G^-1(G(u) - R) against u e^-R", r, denom, u * (-big_r).exp(), 1e-12),
    ])
}

fn lenglart(cfg: &ExperimentConfig, r: &str) -> Rows {
    let p = pexp(cfg)?;
    let (lambda, sigma, x0, t) = (cfg.real("lambda"), cfg.real("sigma"), cfg.real("x0"), cfg.real("t"));
    let steps = cfg.int("steps") as usize;
    let paths: Vec<SimPath> =
        par_samples(cfg.n, stream(cfg, 0), |s| gbm_path(0.0, sigma, x0, t, steps, &mut s.rng())).into_iter().collect::<Result<_, _>>()?;
    let lc = LenglartConfig { lambda: Some(lambda), ..LenglartConfig::new(p) };
    let mut rows: Vec<Row> = check_lenglart_domination(&paths, &lc)?.iter().map(|rep| Row::inequality(r, rep)).collect();
    let c = sharp_constants(p);
    rows.push(Row::exact(
        "lambda^-p (lambda/(1-p) + 1) at lambda = p",
        r,
        lenglart_integrated_constant(p, p.get())?,
        c.alpha12.powf(p.get()),
        1e-12,
    ));
    rows.push(Row::info(format!("lambda^-p (lambda/(1-p) + 1) at lambda = {lambda}"), r, lenglart_integrated_constant(p, lambda)?, 0.0));
    Ok(rows)
}

fn exp_clock(cfg: &ExperimentConfig, r: &str) -> Rows {
    let p = pexp(cfg)?;
    let t = cfg.real("t");
    let rows = par_samples(cfg.n, stream(cfg, 0), |s| exp_clock_terminal(p, t, &mut s.rng()));
    let xp: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let ea: Vec<f64> = rows.iter().map(|r| r.1.exp()).collect();
    let m = mean_estimate(&xp)?;
    let a = mean_estimate(&ea)?;
    let cap = (1.0 / p.get()).exp();
    Ok(vec![
        Row::within(format!("E[X_t^p] at t = {t}"), r, &m, t + 1.0, 3.0),
        Row::check(format!("E[e^(A_t)] at t = {t}, bounded by e^(1/p)"), r, a.value, a.std_error, cap, a.value <= cap + 3.0 * a.std_error),
    ])
}

fn convex_counterexample(cfg: &ExperimentConfig, r: &str) -> Rows {
    let p = pexp(cfg)?;
    let pv = p.get();
    let (gamma, x0, t) = (cfg.real("gamma"), cfg.real("x0"), cfg.real("t"));
    let batch = convex_batch(cfg);
    let logs = map_paths(&batch, |path| (path.ln_x(path.len() - 1), path.ln_x_sup_end()))?;
    let xp: Vec<f64> = logs.iter().map(|l| (pv * l.0).exp()).collect();
    let sup_logs: Vec<f64> = logs.iter().map(|l| l.1).collect();
    let m = mean_estimate(&xp)?;
    let sup = estimate_quasinorm_ln(&sup_logs, p)?;
    Ok(vec![
        Row::within(format!("E[X_T^p] at T = {t}"), r, &m, convex_counterexample_moment(gamma, x0, p, t), 4.0),
        Row::info("ln ||X*_T||_p", r, sup.value, sup.std_error),
        Row::info("time 1/(2 p gamma) at which E[X_t^p] becomes infinite", r, 1.0 / (2.0 * pv * gamma), 0.0),
    ])
}

fn exp_moments(cfg: &ExperimentConfig, r: &str) -> Rows {
    let p = pexp(cfg)?;
    let (g1, g2, big_r, x0) = (cfg.real("gamma1"), cfg.real("gamma2"), cfg.real("r"), cfg.real("x0"));
    let (gamma, kappa) = squared_norm_constants(big_r, g1, g2);
    let u = ScalarField::squared_norm(1, big_r);
    let ec = ExpMomentConfig { gamma, kappa, p, t_end: cfg.real("t"), n: cfg.n, dt: cfg.real("dt"), audit: true };
    let out = check_exponential_moment(&sup_growth_sde(g1, g2, x0)?, &u, &ec, stream(cfg, 0))?;
    let mut rows = vec![Row::inequality(r, &out.report)];
    if let Some(a) = &out.audit {
        rows.push(Row::check("smallest gamma for the combined condition on sampled states", r, a.combined.min_gamma, 0.0, gamma, a.combined_ok));
        rows.push(Row::info("smallest gamma for the split condition on sampled states", r, a.split.min_gamma, 0.0));
    }
    // the feedback example only gets its audit reported: its verdict is not meaningful
    let fb = ExpMomentConfig { n: cfg.n.min(500), ..ec };
    let fb_out = check_exponential_moment(&sup_feedback_sde(0.5)?, &ScalarField::squared_norm(1, 1.0), &fb, stream(cfg, 1))?;
    if let Some(a) = &fb_out.audit {
        rows.push(Row::info("feedback example, x0 = 0.5: smallest gamma for the combined condition", r, a.combined.min_gamma, 0.0));
        rows.push(Row::info("feedback example, x0 = 0.5: smallest gamma for the split condition", r, a.split.min_gamma, 0.0));
    }
    Ok(rows)
}

fn sqrt_shift_tail(cfg: &ExperimentConfig, r: &str) -> Rows {
    let p = pexp(cfg)?;
    let bp = blocks(cfg)?;
    let y = par_samples(cfg.n, stream(cfg, 0), |s| simulate_sqrt_shift_process(&bp, &mut s.rng()));
    let mut rows = profile_rows(&y, "sup Y^2", r)?;
    let base = BlockParams { k: 0, ..bp };
    let y0: Vec<f64> = par_samples(cfg.n, stream(cfg, 1), |s| simulate_sqrt_shift_process(&base, &mut s.rng()) - 1.0);
    let est = estimate_moment(&y0, p.get())?;
    rows.push(Row::within("E[(sup Y^2 - 1)^p] with no blocks", r, &est, 1.0 / (1.0 - p.get()), 3.0));
    Ok(rows)
}
