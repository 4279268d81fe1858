//! Moment and quasinorm estimators with standard errors.

use serde::{Deserialize, Serialize};

use crate::bounds::PExponent;
use crate::error::{domain, Error, Result};

/// Sample kurtosis of `Y` above which the median of means is used.
pub const KURTOSIS_SWITCH: f64 = 100.0;
pub const MOM_GROUPS: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EstimateMethod {
    Mean,
    MedianOfMeans,
}

/// A Monte Carlo estimate. With `log_domain` set, `value` is the log of
/// the estimated quantity and `std_error` is on the log scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MCEstimate {
    pub value: f64,
    pub std_error: f64,
    pub n: usize,
    pub method: EstimateMethod,
    pub log_domain: bool,
}

impl MCEstimate {
    /// A known quantity with zero error.
    pub fn exact(value: f64, n: usize) -> Self {
        Self { value, std_error: 0.0, n, method: EstimateMethod::Mean, log_domain: false }
    }

    /// Linear-scale value and delta-method standard error.
    pub fn linear(&self) -> Self {
        if !self.log_domain {
            return *self;
        }
        let v = self.value.exp();
        Self { value: v, std_error: v * self.std_error, log_domain: false, ..*self }
    }

    /// Log-scale value and delta-method standard error.
    pub fn ln(&self) -> Self {
        if self.log_domain {
            return *self;
        }
        Self {
            value: self.value.ln(),
            std_error: self.std_error / self.value.abs(),
            log_domain: true,
            ..*self
        }
    }

    /// `(c * Y)` for a constant `c > 0`.
    pub fn scale(&self, c: f64) -> Self {
        if self.log_domain {
            Self { value: self.value + c.ln(), ..*self }
        } else {
            Self { value: c * self.value, std_error: c * self.std_error, ..*self }
        }
    }

    /// `within(x, k)`: `|value - x| <= k SE`.
    pub fn within(&self, x: f64, k: f64) -> bool {
        (self.value - x).abs() <= k * self.std_error
    }
}

/// Pairwise summation; the grouping depends only on the length.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    const BLOCK: usize = 128;
    if xs.len() <= BLOCK {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

fn central_moments(xs: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mean = pairwise_sum(xs) / n;
    let dev2: Vec<f64> = xs.iter().map(|x| (x - mean) * (x - mean)).collect();
    let m2 = pairwise_sum(&dev2) / n;
    let dev4: Vec<f64> = dev2.iter().map(|d| d * d).collect();
    let m4 = pairwise_sum(&dev4) / n;
    (mean, m2, m4)
}

/// `m4 / m2^2`, zero for constant samples.
pub fn kurtosis(xs: &[f64]) -> f64 {
    let (_, m2, m4) = central_moments(xs);
    if m2 > 0.0 {
        m4 / (m2 * m2)
    } else {
        0.0
    }
}

/// Sample mean with its standard error; heavy-tailed samples switch to
/// the median of 32 contiguous group means.
pub fn mean_estimate(ys: &[f64]) -> Result<MCEstimate> {
    let n = ys.len();
    if n < 2 {
        return Err(Error::TooFewSamples { needed: 2, got: n });
    }
    if let Some(bad) = ys.iter().find(|y| !y.is_finite()) {
        return Err(domain("sample", *bad, "samples must be finite"));
    }
    if ys.iter().all(|y| *y == ys[0]) {
        return Ok(MCEstimate { value: ys[0], std_error: 0.0, n, method: EstimateMethod::Mean, log_domain: false });
    }
    let (mean, m2, m4) = central_moments(ys);
    let kurt = if m2 > 0.0 { m4 / (m2 * m2) } else { 0.0 };
    if kurt > KURTOSIS_SWITCH && n >= 2 * MOM_GROUPS {
        return Ok(median_of_means(ys, MOM_GROUPS));
    }
    let var = m2 * n as f64 / (n as f64 - 1.0);
    Ok(MCEstimate {
        value: mean,
        std_error: (var / n as f64).sqrt(),
        n,
        method: EstimateMethod::Mean,
        log_domain: false,
    })
}

/// Median of `groups` contiguous group means. The standard error is that
/// of a sample median of normal group means, `sqrt(pi/2) sd / sqrt(groups)`.
pub fn median_of_means(ys: &[f64], groups: usize) -> MCEstimate {
    let n = ys.len();
    let size = n / groups;
    let mut means: Vec<f64> = (0..groups)
        .map(|g| {
            let hi = if g + 1 == groups { n } else { (g + 1) * size };
            let chunk = &ys[g * size..hi];
            pairwise_sum(chunk) / chunk.len() as f64
        })
        .collect();
    let (_, m2, _) = central_moments(&means);
    let sd = (m2 * groups as f64 / (groups as f64 - 1.0)).sqrt();
    means.sort_by(f64::total_cmp);
    let median = if groups.is_multiple_of(2) {
        0.5 * (means[groups / 2 - 1] + means[groups / 2])
    } else {
        means[groups / 2]
    };
    MCEstimate {
        value: median,
        std_error: (std::f64::consts::PI / 2.0).sqrt() * sd / (groups as f64).sqrt(),
        n,
        method: EstimateMethod::MedianOfMeans,
        log_domain: false,
    }
}

fn check_nonnegative(samples: &[f64]) -> Result<()> {
    match samples.iter().find(|y| !(**y >= 0.0)) {
        Some(bad) => Err(domain("sample", *bad, "quasinorms need nonnegative samples")),
        None => Ok(()),
    }
}

/// `E[Y^r]` for any `r > 0`.
pub fn estimate_moment(samples: &[f64], r: f64) -> Result<MCEstimate> {
    if !(r > 0.0) {
        return Err(domain("r", r, "exponent must be positive"));
    }
    check_nonnegative(samples)?;
    let ys: Vec<f64> = samples.iter().map(|y| y.powf(r)).collect();
    mean_estimate(&ys)
}

/// `E[Y^r]^(1/r)` with a delta-method standard error, any `r > 0`.
pub fn estimate_norm(samples: &[f64], r: f64) -> Result<MCEstimate> {
    let m = estimate_moment(samples, r)?;
    if m.value <= 0.0 {
        return Ok(MCEstimate { value: 0.0, std_error: m.std_error.powf(1.0 / r), ..m });
    }
    let value = m.value.powf(1.0 / r);
    Ok(MCEstimate { value, std_error: value / (r * m.value) * m.std_error, ..m })
}

/// `||Y||_p = E[Y^p]^(1/p)`.
pub fn estimate_quasinorm(samples: &[f64], p: PExponent) -> Result<MCEstimate> {
    estimate_norm(samples, p.get())
}

/// `ln ||Y||_r` from `ln Y` (entries may be `-inf`), optionally with log
/// importance weights: `ln E[w Y^r]^(1/r)`.
///
/// `r ln Y + ln w` is shifted by its maximum before exponentiating, so the
/// estimate survives values far beyond the floating-point range.
pub fn estimate_norm_ln(log_samples: &[f64], r: f64, log_weights: Option<&[f64]>) -> Result<MCEstimate> {
    if !(r > 0.0) {
        return Err(domain("r", r, "exponent must be positive"));
    }
    let n = log_samples.len();
    if n < 2 {
        return Err(Error::TooFewSamples { needed: 2, got: n });
    }
    if let Some(w) = log_weights {
        if w.len() != n {
            return Err(Error::Invalid(format!("{} weights for {n} samples", w.len())));
        }
    }
    let v: Vec<f64> = (0..n)
        .map(|i| r * log_samples[i] + log_weights.map_or(0.0, |w| w[i]))
        .collect();
    if let Some(bad) = v.iter().find(|x| x.is_nan() || **x == f64::INFINITY) {
        return Err(domain("ln sample", *bad, "log samples must be below +inf"));
    }
    let vmax = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if vmax == f64::NEG_INFINITY {
        return Ok(MCEstimate {
            value: f64::NEG_INFINITY,
            std_error: 0.0,
            n,
            method: EstimateMethod::Mean,
            log_domain: true,
        });
    }
    let e: Vec<f64> = v.iter().map(|x| (x - vmax).exp()).collect();
    let m = mean_estimate(&e)?;
    Ok(MCEstimate {
        value: (vmax + m.value.ln()) / r,
        std_error: m.std_error / (r * m.value),
        n,
        method: m.method,
        log_domain: true,
    })
}

/// [`estimate_norm_ln`] for `p` in `(0, 1)`.
pub fn estimate_quasinorm_ln(log_samples: &[f64], p: PExponent) -> Result<MCEstimate> {
    estimate_norm_ln(log_samples, p.get(), None)
}

/// `ln E[Y]` from `ln Y`.
pub fn estimate_mean_ln(log_samples: &[f64]) -> Result<MCEstimate> {
    estimate_norm_ln(log_samples, 1.0, None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{exponential, uniform_open, RngStream};
    use proptest::prelude::*;

    #[test]
    fn constant_samples() {
        let e = estimate_quasinorm(&[3.0; 100], PExponent::new(0.4).unwrap()).unwrap();
        assert!((e.value - 3.0).abs() < 1e-14);
        assert_eq!(e.std_error, 0.0);
        let l = estimate_quasinorm_ln(&[3f64.ln(); 100], PExponent::new(0.4).unwrap()).unwrap();
        assert!((l.value - 3f64.ln()).abs() < 1e-14);
        assert_eq!(l.std_error, 0.0);
    }

    #[test]
    fn rejects_bad_input() {
        let p = PExponent::new(0.5).unwrap();
        assert!(matches!(estimate_quasinorm(&[1.0], p), Err(Error::TooFewSamples { .. })));
        assert!(estimate_quasinorm(&[1.0, -1.0], p).is_err());
        assert!(estimate_quasinorm_ln(&[], p).is_err());
        assert!(estimate_quasinorm_ln(&[0.0, f64::NAN], p).is_err());
    }

    #[test]
    fn zero_samples_in_logs() {
        let p = PExponent::new(0.5).unwrap();
        let e = estimate_quasinorm_ln(&[f64::NEG_INFINITY, 0.0], p).unwrap();
        // E[Y^p] = 1/2, norm = 1/4
        assert!((e.value - 0.25f64.ln()).abs() < 1e-14);
        assert_eq!(estimate_quasinorm_ln(&[f64::NEG_INFINITY; 3], p).unwrap().value, f64::NEG_INFINITY);
    }

    #[test]
    fn log_domain_survives_overflow() {
        let p = PExponent::new(0.5).unwrap();
        let logs = [1000.0, 1000.0 + 2f64.ln()];
        let e = estimate_quasinorm_ln(&logs, p).unwrap();
        // ((1 + sqrt 2)/2)^2 e^1000
        let exact = 1000.0 + 2.0 * ((1.0 + 2f64.sqrt()) / 2.0).ln();
        assert!((e.value - exact).abs() < 1e-12);
    }

    #[test]
    fn pareto_norm() {
        let p = PExponent::new(0.5).unwrap();
        let mut r = RngStream::new(1, 0).rng();
        let s: Vec<f64> = (0..1_000_000).map(|_| 1.0 / uniform_open(&mut r)).collect();
        let e = estimate_quasinorm(&s, p).unwrap();
        assert_eq!(e.method, EstimateMethod::MedianOfMeans);
        assert!(e.within(4.0, 3.0), "{e:?}");
    }

    #[test]
    fn mom_on_light_tails_is_consistent() {
        let mut r = RngStream::new(2, 0).rng();
        let ys: Vec<f64> = (0..64_000).map(|_| exponential(&mut r)).collect();
        let plain = mean_estimate(&ys).unwrap();
        assert_eq!(plain.method, EstimateMethod::Mean);
        let mom = median_of_means(&ys, MOM_GROUPS);
        assert!((mom.value - 1.0).abs() < 4.0 * mom.std_error);
        assert!(mom.std_error > plain.std_error);
    }

    #[test]
    fn linear_and_log_views_agree() {
        let e = MCEstimate { value: 2f64.ln(), std_error: 0.1, n: 10, method: EstimateMethod::Mean, log_domain: true };
        let l = e.linear();
        assert!((l.value - 2.0).abs() < 1e-15 && (l.std_error - 0.2).abs() < 1e-15);
        let back = l.ln();
        assert!((back.value - e.value).abs() < 1e-15 && (back.std_error - 0.1).abs() < 1e-15);
        assert!((e.scale(3.0).linear().value - 6.0).abs() < 1e-14);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn pairwise_matches_naive(xs in proptest::collection::vec(-1e3f64..1e3, 0..2000)) {
            let naive: f64 = xs.iter().sum();
            prop_assert!((pairwise_sum(&xs) - naive).abs() <= 1e-9 * (1.0 + xs.iter().map(|x| x.abs()).sum::<f64>()));
        }

        #[test]
        fn log_and_linear_routes_agree(xs in proptest::collection::vec(1e-3f64..1e3, 2..500), p in 0.05f64..0.95) {
            let p = PExponent::new(p).unwrap();
            let lin = estimate_quasinorm(&xs, p).unwrap();
            let logs: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
            let lg = estimate_quasinorm_ln(&logs, p).unwrap().linear();
            prop_assert!((lin.value - lg.value).abs() <= 1e-9 * lin.value);
            prop_assert!((lin.std_error - lg.std_error).abs() <= 1e-6 * lin.value.max(lin.std_error));
        }

        #[test]
        fn quasinorm_is_homogeneous(xs in proptest::collection::vec(0.0f64..1e3, 2..300), c in 1e-3f64..1e3, p in 0.05f64..0.95) {
            let p = PExponent::new(p).unwrap();
            let a = estimate_quasinorm(&xs, p).unwrap().value * c;
            let scaled: Vec<f64> = xs.iter().map(|x| x * c).collect();
            let b = estimate_quasinorm(&scaled, p).unwrap().value;
            prop_assert!((a - b).abs() <= 1e-9 * a.max(1e-300));
        }
    }
}
