//! Discretization-free samplers for the sharpness constructions and the
//! counterexamples, plus exact grid samplers of a few classical processes.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::path::{AssumptionTag, SimPath};
use crate::bounds::PExponent;
use crate::error::{domain, Result};
use crate::rng::{exponential, standard_normal, uniform_open};

/// Running maximum of a Brownian motion started at `start > 0` and absorbed
/// at 0: `P[max >= b] = start / b`, sampled as `start / U`.
pub fn sample_absorbed_bm_max<R: Rng + ?Sized>(start: f64, rng: &mut R) -> Result<f64> {
    if !(start > 0.0 && start.is_finite()) {
        return Err(domain("start", start, "must be positive"));
    }
    Ok(start / uniform_open(rng))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlockParams {
    pub epsilon: f64,
    pub delta: f64,
    pub k: u32,
}

impl BlockParams {
    pub fn new(epsilon: f64, delta: f64, k: u32) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(domain("epsilon", epsilon, "must lie in (0, 1)"));
        }
        if !(delta > 0.0 && delta < 1.0) {
            return Err(domain("delta", delta, "must lie in (0, 1)"));
        }
        Ok(Self { epsilon, delta, k })
    }

    /// `(1 - epsilon) delta`, the drift-phase gain per block.
    pub fn gamma(&self) -> f64 {
        (1.0 - self.epsilon) * self.delta
    }

    /// `k delta + epsilon delta`, the end of the last Brownian phase.
    pub fn horizon(&self) -> f64 {
        (self.k as f64 + self.epsilon) * self.delta
    }
}

/// `E[(X*_T)^p] = (1-p)^-1 (1 + p gamma / (1-p))^k` for the block construction.
pub fn block_moment(p: PExponent, bp: &BlockParams) -> f64 {
    let p = p.get();
    (1.0 + p * bp.gamma() / (1.0 - p)).powi(bp.k as i32) / (1.0 - p)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlockSample {
    /// `X*` at the end of block `k`.
    pub s_k: f64,
    /// `S_0, ..., S_k`.
    pub trace: Vec<f64>,
    /// Maximum reached inside each Brownian phase.
    pub block_max: Vec<f64>,
}

/// Exact sample of the running supremum of the block construction:
/// `S_0 = 1/U_0`, `S_{j+1} = S_j max(1, gamma / U_{j+1})`.
pub fn simulate_sharpness_blocks<R: Rng + ?Sized>(bp: &BlockParams, rng: &mut R) -> BlockSample {
    let gamma = bp.gamma();
    let mut s = 1.0 / uniform_open(rng);
    let mut trace = Vec::with_capacity(bp.k as usize + 1);
    let mut block_max = Vec::with_capacity(bp.k as usize + 1);
    trace.push(s);
    block_max.push(s);
    for _ in 0..bp.k {
        let m = gamma * s / uniform_open(rng);
        block_max.push(m);
        s = s.max(m);
        trace.push(s);
    }
    BlockSample { s_k: s, trace, block_max }
}

/// `S_k` only, without the trace.
pub fn sample_block_sup<R: Rng + ?Sized>(bp: &BlockParams, rng: &mut R) -> f64 {
    let gamma = bp.gamma();
    let mut s = 1.0 / uniform_open(rng);
    for _ in 0..bp.k {
        s *= (gamma / uniform_open(rng)).max(1.0);
    }
    s
}

/// `sup_t Y_t^2` for `Y = sqrt(X + 1)`, i.e. `S_k + 1`.
pub fn simulate_sqrt_shift_process<R: Rng + ?Sized>(bp: &BlockParams, rng: &mut R) -> f64 {
    sample_block_sup(bp, rng) + 1.0
}

/// The block construction materialized on a grid with `A = t`, `H = 1`,
/// `M = X - 1 - int_{drift phases} X* ds`.
///
/// Each Brownian phase contributes its start, its (exactly sampled)
/// maximum placed at the phase midpoint, and its absorption at 0; the drift
/// phase is linear, so its endpoints suffice.
pub fn sharpness_block_path<R: Rng + ?Sized>(bp: &BlockParams, rng: &mut R) -> SimPath {
    let sample = simulate_sharpness_blocks(bp, rng);
    let (eps, delta, gamma) = (bp.epsilon, bp.delta, bp.gamma());
    let cap = 3 * (bp.k as usize + 1) + 1;
    let (mut times, mut x, mut drift_int) = (Vec::with_capacity(cap), Vec::with_capacity(cap), Vec::with_capacity(cap));
    let mut start = 1.0;
    let mut integral = 0.0;
    for j in 0..=bp.k as usize {
        let t0 = j as f64 * delta;
        if j > 0 {
            // drift phase of the previous block ends here
            integral += gamma * sample.trace[j - 1];
            start = gamma * sample.trace[j - 1];
        }
        times.extend([t0, t0 + 0.5 * eps * delta, t0 + eps * delta]);
        x.extend([start, sample.block_max[j], 0.0]);
        drift_int.extend([integral, integral, integral]);
    }
    let n = times.len();
    let a = times.clone();
    let h = vec![1.0; n];
    let m: Vec<f64> = (0..n).map(|i| x[i] - 1.0 - drift_int[i]).collect();
    SimPath::new(times, x, a, h, m, AssumptionTag::Sup)
}

fn grid_with(t_end: f64, steps: usize, extra: Option<f64>) -> Vec<f64> {
    let steps = steps.max(1);
    let mut times: Vec<f64> = (0..=steps).map(|i| t_end * i as f64 / steps as f64).collect();
    if let Some(z) = extra {
        if z > 0.0 && z < t_end {
            // twice: the first copy carries the left limit at the jump
            let i = times.partition_point(|&s| s < z);
            times.splice(i..i, [z, z]);
        }
    }
    times
}

/// `X_t = exp((Z ^ t)/p)`, `A_t = 1{t >= Z}/p`, `H = 1`,
/// `M_t = X_t - 1 - e^{Z/p} 1{t >= Z} / p` with `Z ~ Exp(1)` inserted into
/// a uniform grid of `steps` intervals on `[0, T]`. `Z` appears twice, first
/// with the left limits.
pub fn simulate_exp_clock_process<R: Rng + ?Sized>(p: PExponent, t_end: f64, steps: usize, rng: &mut R) -> Result<SimPath> {
    if !(t_end > 0.0) {
        return Err(domain("T", t_end, "horizon must be positive"));
    }
    let p = p.get();
    let z = exponential(rng);
    let times = grid_with(t_end, steps, Some(z));
    let n = times.len();
    let (mut x, mut a, mut m, mut lx) = (Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n));
    let pre_jump = times.partition_point(|&s| s < z);
    for (i, &t) in times.iter().enumerate() {
        let l = z.min(t) / p;
        let jumped = t >= z && i != pre_jump;
        let xv = l.exp();
        lx.push(l);
        x.push(xv);
        a.push(if jumped { 1.0 / p } else { 0.0 });
        m.push(xv - 1.0 - if jumped { (z / p).exp() / p } else { 0.0 });
    }
    let h = vec![1.0; n];
    Ok(SimPath::new(times, x, a, h, m, AssumptionTag::NoSup).with_log_x(lx))
}

/// `(X_t^p, A_t)` of the exponential-clock process at a single time.
pub fn exp_clock_terminal<R: Rng + ?Sized>(p: PExponent, t: f64, rng: &mut R) -> (f64, f64) {
    let z = exponential(rng);
    let xp = z.min(t).exp();
    let a = if t >= z { 1.0 / p.get() } else { 0.0 };
    (xp, a)
}

/// One draw of the maximal-inequality extremal pair, in logs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaSample {
    /// `ln sup X`; `-inf` when `Z > n`.
    pub ln_sup_x: f64,
    /// `ln sup H = ln(p (e^{(Z ^ n)/p} - 1))`.
    pub ln_sup_h: f64,
    /// Log likelihood ratio of the target to the sampling law of `Z`.
    pub ln_weight: f64,
}

fn alpha_from_z<R: Rng + ?Sized>(n: f64, p: f64, z: f64, rng: &mut R) -> (f64, f64) {
    let u = uniform_open(rng);
    let ln_sup_x = if z <= n { z / p - u.ln() } else { f64::NEG_INFINITY };
    let zn = z.min(n);
    let ln_sup_h = p.ln() + zn / p + (-(-zn / p).exp_m1()).ln();
    (ln_sup_x, ln_sup_h)
}

/// `sup X = e^{Z/p} 1{Z <= n} / U` and `sup H = p (e^{(Z ^ n)/p} - 1)`
/// with `Z ~ Exp(1)`, `U ~ U(0,1)` independent.
pub fn simulate_alpha_sharpness<R: Rng + ?Sized>(n: u32, p: PExponent, rng: &mut R) -> Result<AlphaSample> {
    if n == 0 {
        return Err(domain("n", 0.0, "must be at least 1"));
    }
    let z = exponential(rng);
    let (ln_sup_x, ln_sup_h) = alpha_from_z(n as f64, p.get(), z, rng);
    Ok(AlphaSample { ln_sup_x, ln_sup_h, ln_weight: 0.0 })
}

/// Importance-sampled variant of [`simulate_alpha_sharpness`]: `Z` is drawn
/// uniform on `[0, n]` with probability `n/(n+1)` and as `n + Exp(1)`
/// otherwise, and the sample carries the likelihood ratio. Under the plain
/// law the relevant event `Z` near `n` has probability `e^-n`.
pub fn simulate_alpha_sharpness_weighted<R: Rng + ?Sized>(n: u32, p: PExponent, rng: &mut R) -> Result<AlphaSample> {
    if n == 0 {
        return Err(domain("n", 0.0, "must be at least 1"));
    }
    let nf = n as f64;
    let pick = uniform_open(rng) * (nf + 1.0);
    let z = if pick < nf { pick } else { nf + exponential(rng) };
    // target density e^-z, proposal 1/(n+1) on [0,n] and e^{-(z-n)}/(n+1) beyond
    let ln_weight = (nf + 1.0).ln() - z.min(nf);
    let (ln_sup_x, ln_sup_h) = alpha_from_z(nf, p.get(), z, rng);
    Ok(AlphaSample { ln_sup_x, ln_sup_h, ln_weight })
}

/// `E[(sup X)^p] = n / (1-p)`.
pub fn alpha_sup_x_moment(n: u32, p: PExponent) -> f64 {
    n as f64 / (1.0 - p.get())
}

/// The compensated single-jump pair `X_t = e^{Z/p} 1{t >= Z}`,
/// `H_t = int_0^{t ^ Z} e^{s/p} ds`, `M = X - H`, `A = 0`, with `Z`
/// inserted into the grid. `H` is the compensator of `X`, so `X` is
/// dominated by `H`.
pub fn alpha_construction_path<R: Rng + ?Sized>(p: PExponent, t_end: f64, steps: usize, rng: &mut R) -> Result<SimPath> {
    if !(t_end > 0.0) {
        return Err(domain("T", t_end, "horizon must be positive"));
    }
    let p = p.get();
    let z = exponential(rng);
    let times = grid_with(t_end, steps, Some(z));
    let pre_jump = times.partition_point(|&s| s < z);
    let x: Vec<f64> = times
        .iter()
        .enumerate()
        .map(|(i, &t)| if t >= z && i != pre_jump { (z / p).exp() } else { 0.0 })
        .collect();
    let h: Vec<f64> = times.iter().map(|&t| p * (t.min(z) / p).exp_m1()).collect();
    let m: Vec<f64> = x.iter().zip(&h).map(|(x, h)| x - h).collect();
    let a = vec![0.0; times.len()];
    Ok(SimPath::new(times, x, a, h, m, AssumptionTag::Sup))
}

/// `X_t = exp(gamma (x0 + W_t)^2)` on a grid of step `dt`, with
/// `A = t`, `H = e^{gamma x0^2}` and `M` the remainder after the left-point
/// drift sum with `eta(x) = gamma x (1 + 2 ln x)`. `ln X` is kept.
pub fn simulate_convex_counterexample<R: Rng + ?Sized>(
    gamma: f64,
    x0: f64,
    t_end: f64,
    dt: f64,
    rng: &mut R,
) -> Result<SimPath> {
    if !(gamma > 0.0) {
        return Err(domain("gamma", gamma, "must be positive"));
    }
    if !(x0 > 0.0) {
        return Err(domain("x0", x0, "must be positive"));
    }
    if !(t_end > 0.0) {
        return Err(domain("T", t_end, "horizon must be positive"));
    }
    if !(dt > 0.0) {
        return Err(domain("dt", dt, "step must be positive"));
    }
    let steps = (t_end / dt).round().max(1.0) as usize;
    let dt = t_end / steps as f64;
    let sq = dt.sqrt();
    let n = steps + 1;
    let (mut times, mut x, mut lx, mut m) = (Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n));
    let h0 = (gamma * x0 * x0).exp();
    let mut w = 0.0;
    let mut drift = 0.0;
    for i in 0..n {
        if i > 0 {
            let l_prev = lx[i - 1];
            drift += gamma * x[i - 1] * (1.0 + 2.0 * l_prev) * dt;
            w += sq * standard_normal(rng);
        }
        let l = gamma * (x0 + w) * (x0 + w);
        let xv = l.exp();
        times.push(i as f64 * dt);
        lx.push(l);
        x.push(xv);
        m.push(xv - h0 - drift);
    }
    m[0] = 0.0;
    let a = times.clone();
    let h = vec![h0; n];
    Ok(SimPath::new(times, x, a, h, m, AssumptionTag::NoSup).with_log_x(lx))
}

/// `ln X_T = gamma (x0 + W_T)^2` of the convex counterexample.
pub fn convex_counterexample_terminal_ln<R: Rng + ?Sized>(gamma: f64, x0: f64, t_end: f64, rng: &mut R) -> f64 {
    let w = x0 + t_end.sqrt() * standard_normal(rng);
    gamma * w * w
}

/// `E[X_T^p] = (1 - 2 p gamma T)^{-1/2} exp(p gamma x0^2 / (1 - 2 p gamma T))`,
/// infinite once `2 p gamma T >= 1`.
pub fn convex_counterexample_moment(gamma: f64, x0: f64, p: PExponent, t_end: f64) -> f64 {
    let s = 1.0 - 2.0 * p.get() * gamma * t_end;
    if s <= 0.0 {
        return f64::INFINITY;
    }
    (p.get() * gamma * x0 * x0 / s).exp() / s.sqrt()
}

/// Exact geometric Brownian motion `dX = mu X dt + sigma X dW` on a uniform
/// grid, with `A = mu t`, `H = x0` and `M` the remainder after the
/// left-point sum of `X dA`.
pub fn gbm_path<R: Rng + ?Sized>(mu: f64, sigma: f64, x0: f64, t_end: f64, steps: usize, rng: &mut R) -> Result<SimPath> {
    if !(mu >= 0.0) {
        return Err(domain("mu", mu, "integrator rate must be nonnegative"));
    }
    if !(x0 > 0.0) {
        return Err(domain("x0", x0, "must be positive"));
    }
    if !(t_end > 0.0) {
        return Err(domain("T", t_end, "horizon must be positive"));
    }
    let steps = steps.max(1);
    let dt = t_end / steps as f64;
    let sq = dt.sqrt();
    let drift = (mu - 0.5 * sigma * sigma) * dt;
    let n = steps + 1;
    let (mut times, mut x, mut a, mut m) = (Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n));
    let mut lx = x0.ln();
    let mut integral = 0.0;
    for i in 0..n {
        if i > 0 {
            integral += x[i - 1] * mu * dt;
            lx += drift + sigma * sq * standard_normal(rng);
        }
        let xv = lx.exp();
        times.push(i as f64 * dt);
        a.push(mu * i as f64 * dt);
        x.push(xv);
        m.push(xv - x0 - integral);
    }
    m[0] = 0.0;
    let h = vec![x0; n];
    Ok(SimPath::new(times, x, a, h, m, AssumptionTag::NoSup))
}

/// `X = B^2` with `H_t = t`, `M = B^2 - t`, `A = 0`.
pub fn squared_bm_path<R: Rng + ?Sized>(t_end: f64, steps: usize, rng: &mut R) -> Result<SimPath> {
    if !(t_end > 0.0) {
        return Err(domain("T", t_end, "horizon must be positive"));
    }
    let steps = steps.max(1);
    let dt = t_end / steps as f64;
    let sq = dt.sqrt();
    let mut b = 0.0;
    let times: Vec<f64> = (0..=steps).map(|i| i as f64 * dt).collect();
    let x: Vec<f64> = (0..=steps)
        .map(|i| {
            if i > 0 {
                b += sq * standard_normal(rng);
            }
            b * b
        })
        .collect();
    let h = times.clone();
    let m: Vec<f64> = x.iter().zip(&h).map(|(x, h)| x - h).collect();
    let a = vec![0.0; times.len()];
    Ok(SimPath::new(times, x, a, h, m, AssumptionTag::Sup))
}

/// Poisson counting process `N` of rate `lambda` with `H_t = lambda t`,
/// `M = N - lambda t`, `A = 0`.
pub fn poisson_path<R: Rng + ?Sized>(lambda: f64, t_end: f64, steps: usize, rng: &mut R) -> Result<SimPath> {
    if !(lambda > 0.0) {
        return Err(domain("lambda", lambda, "rate must be positive"));
    }
    if !(t_end > 0.0) {
        return Err(domain("T", t_end, "horizon must be positive"));
    }
    let steps = steps.max(1);
    let dt = t_end / steps as f64;
    let times: Vec<f64> = (0..=steps).map(|i| i as f64 * dt).collect();
    let mut x = vec![0.0; times.len()];
    let mut next = exponential(rng) / lambda;
    let mut count = 0.0;
    for (i, &t) in times.iter().enumerate() {
        while next <= t {
            count += 1.0;
            next += exponential(rng) / lambda;
        }
        x[i] = count;
    }
    let h: Vec<f64> = times.iter().map(|t| lambda * t).collect();
    let m: Vec<f64> = x.iter().zip(&h).map(|(x, h)| x - h).collect();
    let a = vec![0.0; times.len()];
    Ok(SimPath::new(times, x, a, h, m, AssumptionTag::Sup))
}
