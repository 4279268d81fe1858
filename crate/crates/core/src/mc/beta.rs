//! The damping rate that the block construction forces, against `beta`.

use serde::{Deserialize, Serialize};

use super::estimate::estimate_norm_ln;
use crate::bounds::{sharp_constants, PExponent};
use crate::error::{domain, Error, Result};
use crate::rng::RngStream;
use crate::sim::exact::{sample_block_sup, BlockParams};
use crate::sim::par_samples;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BetaRate {
    pub delta: f64,
    /// `ln(1 + p beta gamma) / (p delta)`
    pub rate: f64,
    /// `beta - rate`
    pub gap: f64,
}

/// `rate(delta) = ln(1 + p beta (1 - eps) delta) / (p delta)`, the growth
/// rate of `ln ||X*_T||_p` per unit time in the block construction.
pub fn block_rate(p: PExponent, delta: f64, epsilon: f64) -> Result<f64> {
    let bp = BlockParams::new(epsilon, delta, 0)?;
    let pv = p.get();
    let beta = sharp_constants(p).beta;
    Ok((pv * beta * bp.gamma()).ln_1p() / (pv * delta))
}

pub fn beta_rate_scan(p: PExponent, deltas: &[f64], epsilon: f64) -> Result<Vec<BetaRate>> {
    let beta = sharp_constants(p).beta;
    deltas
        .iter()
        .map(|&delta| {
            let rate = block_rate(p, delta, epsilon)?;
            Ok(BetaRate { delta, rate, gap: beta - rate })
        })
        .collect()
}

/// Least-squares slope of `ln ||S_k||_p` against `T = k delta` from
/// independent batches of `n` exact block samples per `k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateFit {
    pub ks: Vec<u32>,
    pub log_norms: Vec<f64>,
    pub std_errors: Vec<f64>,
    pub slope: f64,
    pub slope_se: f64,
}

pub fn fit_block_rate(p: PExponent, delta: f64, epsilon: f64, ks: &[u32], n: usize, base: RngStream) -> Result<RateFit> {
    if ks.len() < 2 {
        return Err(Error::Invalid("need at least two block counts".into()));
    }
    if n < 2 {
        return Err(Error::TooFewSamples { needed: 2, got: n });
    }
    let mut log_norms = Vec::with_capacity(ks.len());
    let mut std_errors = Vec::with_capacity(ks.len());
    for (j, &k) in ks.iter().enumerate() {
        let bp = BlockParams::new(epsilon, delta, k)?;
        let stream = RngStream::new(base.seed, base.stream_id.wrapping_add((j as u64) << 40));
        let logs = par_samples(n, stream, |s| sample_block_sup(&bp, &mut s.rng()).ln());
        let e = estimate_norm_ln(&logs, p.get(), None)?;
        log_norms.push(e.value);
        std_errors.push(e.std_error);
    }
    let ts: Vec<f64> = ks.iter().map(|&k| k as f64 * delta).collect();
    let t_mean = ts.iter().sum::<f64>() / ts.len() as f64;
    let sxx: f64 = ts.iter().map(|t| (t - t_mean).powi(2)).sum();
    if !(sxx > 0.0) {
        return Err(domain("delta", delta, "block counts must differ"));
    }
    let weights: Vec<f64> = ts.iter().map(|t| (t - t_mean) / sxx).collect();
    let slope = weights.iter().zip(&log_norms).map(|(w, y)| w * y).sum();
    let slope_se = weights.iter().zip(&std_errors).map(|(w, s)| (w * s).powi(2)).sum::<f64>().sqrt();
    Ok(RateFit { ks: ks.to_vec(), log_norms, std_errors, slope, slope_se })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_delta_rate_is_close_to_beta() {
        let p = PExponent::new(0.5).unwrap();
        let r = block_rate(p, 0.05, 0.01).unwrap();
        // oracle: ln(1 + 0.0495) / 0.025
        assert!((r - 1.0495f64.ln() / 0.025).abs() < 1e-12);
        assert!((1.9..=2.0).contains(&r));
    }

    #[test]
    fn rate_increases_as_delta_shrinks() {
        let p = PExponent::new(0.3).unwrap();
        let deltas = [0.9, 0.5, 0.2, 0.1, 0.05, 0.01, 0.001];
        let scan = beta_rate_scan(p, &deltas, 0.0001).unwrap();
        for w in scan.windows(2) {
            assert!(w[1].rate > w[0].rate);
            assert!(w[1].gap >= 0.0);
        }
        assert!(scan.last().unwrap().gap < 1e-3);
    }

    #[test]
    fn mc_slope_matches_rate() {
        let p = PExponent::new(0.3).unwrap();
        let (delta, eps) = (0.5, 0.01);
        let fit = fit_block_rate(p, delta, eps, &[2, 3, 4, 5, 6, 7, 8], 100_000, RngStream::new(8, 0)).unwrap();
        let rate = block_rate(p, delta, eps).unwrap();
        assert!((fit.slope - rate).abs() < 3.0 * fit.slope_se, "{} ± {} vs {rate}", fit.slope, fit.slope_se);
    }
}
