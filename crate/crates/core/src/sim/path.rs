use serde::{Deserialize, Serialize};

use crate::bounds::EtaSpec;
use crate::error::{Error, Result};

/// Which integrand the assumption uses: `eta(X*_{s-})` or `eta(X_{s-})`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AssumptionTag {
    Sup,
    NoSup,
}

impl AssumptionTag {
    pub fn name(self) -> &'static str {
        match self {
            AssumptionTag::Sup => "A_sup",
            AssumptionTag::NoSup => "A_nosup",
        }
    }

    /// Every `A_nosup` quadruple also satisfies `A_sup`.
    pub fn implies(self, required: AssumptionTag) -> bool {
        self == required || (self == AssumptionTag::NoSup && required == AssumptionTag::Sup)
    }
}

/// A sample of `(X, A, H, M)` on a time grid, with the running supremum of `X`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimPath {
    pub times: Vec<f64>,
    pub x: Vec<f64>,
    pub a: Vec<f64>,
    pub h: Vec<f64>,
    pub m: Vec<f64>,
    pub x_sup: Vec<f64>,
    /// `ln X`, kept when `X` is naturally computed in logs.
    pub log_x: Option<Vec<f64>>,
    pub tag: AssumptionTag,
}

impl SimPath {
    pub fn new(times: Vec<f64>, x: Vec<f64>, a: Vec<f64>, h: Vec<f64>, m: Vec<f64>, tag: AssumptionTag) -> Self {
        let x_sup = running_max(&x);
        Self {
            times,
            x,
            a,
            h,
            m,
            x_sup,
            log_x: None,
            tag,
        }
    }

    pub fn with_log_x(mut self, log_x: Vec<f64>) -> Self {
        self.log_x = Some(log_x);
        self
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn t_end(&self) -> f64 {
        *self.times.last().unwrap()
    }

    pub fn x_end(&self) -> f64 {
        *self.x.last().unwrap()
    }

    pub fn x_sup_end(&self) -> f64 {
        *self.x_sup.last().unwrap()
    }

    pub fn a_end(&self) -> f64 {
        *self.a.last().unwrap()
    }

    pub fn h_end(&self) -> f64 {
        *self.h.last().unwrap()
    }

    /// `ln X_i`.
    pub fn ln_x(&self, i: usize) -> f64 {
        match &self.log_x {
            Some(l) => l[i],
            None => self.x[i].ln(),
        }
    }

    /// `ln X*_T`.
    pub fn ln_x_sup_end(&self) -> f64 {
        match &self.log_x {
            Some(l) => l.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            None => self.x_sup_end().ln(),
        }
    }

    /// Index of the last grid point with time `<= t`.
    pub fn index_at(&self, t: f64) -> usize {
        self.times.partition_point(|&s| s <= t).saturating_sub(1)
    }

    /// Structural checks: equal lengths, nondecreasing grid, `A(0) = 0`,
    /// `M(0) = 0`, `A` and `H` nondecreasing, `H >= 0`, and `x_sup` equal to
    /// the running maximum of `x`.
    pub fn validate(&self) -> Result<()> {
        let n = self.times.len();
        if n == 0 {
            return Err(Error::Invalid("empty path".into()));
        }
        let lens = [self.x.len(), self.a.len(), self.h.len(), self.m.len(), self.x_sup.len()];
        if lens.iter().any(|&l| l != n) || self.log_x.as_ref().is_some_and(|l| l.len() != n) {
            return Err(Error::Invalid("channel lengths differ from the time grid".into()));
        }
        if self.times.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::Invalid("time grid decreases".into()));
        }
        if self.a[0] != 0.0 || self.m[0] != 0.0 {
            return Err(Error::Invalid(format!("A(0) = {}, M(0) = {}", self.a[0], self.m[0])));
        }
        if let Some(i) = (1..n).find(|&i| self.a[i] < self.a[i - 1]) {
            return Err(Error::Invalid(format!("A decreases at t = {}", self.times[i])));
        }
        if let Some(i) = (1..n).find(|&i| self.h[i] < self.h[i - 1]) {
            return Err(Error::Invalid(format!("H decreases at t = {}", self.times[i])));
        }
        if self.h[0] < 0.0 {
            return Err(Error::Invalid("H is negative".into()));
        }
        let mut run = f64::NEG_INFINITY;
        for (i, (&x, &s)) in self.x.iter().zip(&self.x_sup).enumerate() {
            run = run.max(x);
            if s != run {
                return Err(Error::Invalid(format!("x_sup is not the running max at index {i}")));
            }
        }
        Ok(())
    }

    /// Largest violation of the tagged assumption on the grid,
    /// `max_t X_t - (sum eta(Y_{s-}) dA + M_t + H_t)` with left-point sums and
    /// `Y = X*` or `Y = X`. Nonpositive when the assumption holds.
    pub fn assumption_residual(&self, eta: &EtaSpec) -> f64 {
        let mut integral = 0.0;
        let mut worst = self.x[0] - self.m[0] - self.h[0];
        for i in 1..self.len() {
            let y = match self.tag {
                AssumptionTag::Sup => self.x_sup[i - 1],
                AssumptionTag::NoSup => self.x[i - 1],
            };
            integral += eta.eval(y.max(eta.c0())) * (self.a[i] - self.a[i - 1]);
            let r = self.x[i] - (integral + self.m[i] + self.h[i]);
            worst = worst.max(r);
        }
        worst
    }

    /// The same path with `H` multiplied by `factor`.
    pub fn scale_h(&self, factor: f64) -> Self {
        let mut out = self.clone();
        out.h.iter_mut().for_each(|h| *h *= factor);
        out
    }
}

pub(crate) fn running_max(x: &[f64]) -> Vec<f64> {
    let mut run = f64::NEG_INFINITY;
    x.iter()
        .map(|&v| {
            run = run.max(v);
            run
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn deterministic_exp() -> SimPath {
        let times: Vec<f64> = (0..=100).map(|i| i as f64 / 100.0).collect();
        let x: Vec<f64> = times.iter().map(|t| t.exp()).collect();
        let a = times.clone();
        let h = vec![1.0; times.len()];
        let m = vec![0.0; times.len()];
        SimPath::new(times, x, a, h, m, AssumptionTag::NoSup)
    }

    #[test]
    fn valid_path_passes() {
        let p = deterministic_exp();
        p.validate().unwrap();
        assert_eq!(p.x_sup_end(), 1f64.exp());
        assert_eq!(p.index_at(0.505), 50);
        assert_eq!(p.index_at(2.0), 100);
    }

    #[test]
    fn left_point_sum_undershoots_for_growing_x() {
        // the Riemann sum lags e^t by O(dt), so the residual is small and positive
        let r = deterministic_exp().assumption_residual(&EtaSpec::linear());
        assert!(r > 0.0 && r < 0.02, "{r}");
    }

    #[test]
    fn broken_paths_rejected() {
        let mut p = deterministic_exp();
        p.a[3] = -1.0;
        assert!(p.validate().is_err());
        let mut p = deterministic_exp();
        p.x_sup[10] = 0.0;
        assert!(p.validate().is_err());
        let mut p = deterministic_exp();
        p.m[0] = 0.5;
        assert!(p.validate().is_err());
    }

    #[test]
    fn nosup_implies_sup() {
        assert!(AssumptionTag::NoSup.implies(AssumptionTag::Sup));
        assert!(!AssumptionTag::Sup.implies(AssumptionTag::NoSup));
    }
}
