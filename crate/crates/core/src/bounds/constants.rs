use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Largest exponent accepted; the constants blow up as `p -> 1`.
pub const P_MAX: f64 = 1.0 - 1e-6;

/// Moment exponent `p` in the open interval (0, 1).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct PExponent(f64);

impl PExponent {
    pub fn new(p: f64) -> Result<Self> {
        if !(p > 0.0 && p < 1.0) {
            return Err(domain("p", p, "must lie in the open interval (0, 1)"));
        }
        if p > P_MAX {
            return Err(domain("p", p, "too close to 1, constants are not representable"));
        }
        Ok(Self(p))
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for PExponent {
    type Error = crate::Error;
    fn try_from(p: f64) -> Result<Self> {
        Self::new(p)
    }
}

impl From<PExponent> for f64 {
    fn from(p: PExponent) -> f64 {
        p.0
    }
}

/// The damping rate `beta` and the moment prefactors `alpha1`, `alpha2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SharpConstants {
    pub p: f64,
    /// `(1 - p)^-1`
    pub beta: f64,
    /// `(1 - p)^(-1/p)`
    pub alpha1: f64,
    /// `p^-1`
    pub alpha2: f64,
    /// `alpha1 * alpha2`, the maximal-inequality constant.
    pub alpha12: f64,
}

pub fn sharp_constants(p: PExponent) -> SharpConstants {
    let p = p.get();
    // ln(1 - p) via ln_1p keeps alpha1 accurate for small p.
    let ln_one_minus_p = (-p).ln_1p();
    let beta = 1.0 / (1.0 - p);
    let alpha1 = (-ln_one_minus_p / p).exp();
    let alpha2 = 1.0 / p;
    SharpConstants {
        p,
        beta,
        alpha1,
        alpha2,
        alpha12: alpha1 * alpha2,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn half() {
        let c = sharp_constants(PExponent::new(0.5).unwrap());
        assert!(rel(c.beta, 2.0) < 1e-15);
        assert!(rel(c.alpha1, 4.0) < 1e-15);
        assert!(rel(c.alpha2, 2.0) < 1e-15);
        assert!(rel(c.alpha12, 8.0) < 1e-15);
    }

    #[test]
    fn three_quarters() {
        let c = sharp_constants(PExponent::new(0.75).unwrap());
        assert!(rel(c.beta, 4.0) < 1e-14);
        assert!(rel(c.alpha2, 4.0 / 3.0) < 1e-15);
        assert!(rel(c.alpha1, 4f64.powf(4.0 / 3.0)) < 1e-14);
        assert!((c.alpha1 - 6.3496).abs() < 1e-4);
    }

    #[test]
    fn boundary_rejected() {
        for p in [0.0, 1.0, -0.1, 1.5, f64::NAN, 1.0 - 1e-7] {
            let err = PExponent::new(p).unwrap_err();
            assert!(err.to_string().contains("`p`"), "{err}");
        }
        assert!(PExponent::new(1.0 - 1e-6).is_ok());
    }

    #[test]
    fn serde_rejects_out_of_range() {
        assert!(serde_json::from_str::<PExponent>("0.4").is_ok());
        assert!(serde_json::from_str::<PExponent>("1.0").is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(50))]
        #[test]
        fn identities(p in 0.01f64..0.99) {
            let c = sharp_constants(PExponent::new(p).unwrap());
            prop_assert!(rel(c.beta * (1.0 - p), 1.0) < 1e-12);
            prop_assert!(rel(c.alpha1.powf(p) * (1.0 - p), 1.0) < 1e-12);
            prop_assert!(rel(c.alpha2 * p, 1.0) < 1e-12);
            prop_assert!(rel(c.alpha12, c.alpha1 * c.alpha2) < 1e-12);
            prop_assert!(c.beta >= 1.0 && c.alpha1 >= 1.0 && c.alpha2 > 1.0);
        }
    }
}
