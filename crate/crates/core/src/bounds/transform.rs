//! `G(x) = int_c^x du / eta(u)`, its inverse, and the damped composite
//! `G^-1(G(x) - kappa a)`.
//!
//! Catalog kinds are evaluated in closed form in the log variable so that
//! doubly and triply exponential values never have to be materialized.
//! `G(c0) = -inf` is represented by `f64::NEG_INFINITY`.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::constants::PExponent;
use super::eta::{EtaKind, EtaSpec};
use super::quadrature::{geometric_simpson, ABS_TOL};
use crate::error::{domain, Error, Result};

/// Largest argument the numeric inverse will bracket to.
pub const X_MAX: f64 = 1e300;
const BISECT_ITERS: usize = 64;
const BISECT_REL_WIDTH: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TransformMode {
    ClosedForm,
    /// Closed form supplied by the caller through [`super::LogPrimitive`].
    LogPrimitive,
    Quadrature,
}

#[derive(Debug, Clone)]
pub struct BoundTransform {
    eta: EtaSpec,
    c: f64,
    mode: TransformMode,
    eps_dom: f64,
    sup_cache: OnceLock<f64>,
}

impl BoundTransform {
    /// Transform with reference point `c > c0`.
    pub fn new(eta: EtaSpec, c: f64) -> Result<Self> {
        if !(c > eta.c0() && c.is_finite()) {
            return Err(domain("c", c, "reference point must exceed the domain floor"));
        }
        let mode = match (eta.kind(), eta.log_primitive()) {
            (EtaKind::Numeric, Some(_)) => TransformMode::LogPrimitive,
            (EtaKind::Numeric, None) => TransformMode::Quadrature,
            _ => TransformMode::ClosedForm,
        };
        let eps_dom = 1e-8 * eta.c0().max(1.0);
        Ok(Self {
            eta,
            c,
            mode,
            eps_dom,
            sup_cache: OnceLock::new(),
        })
    }

    /// Transform at the rate function's default reference point.
    pub fn with_default_reference(eta: EtaSpec) -> Self {
        let c = eta.default_reference();
        Self::new(eta, c).expect("default reference exceeds c0")
    }

    /// Forces the quadrature route even when a closed form is available.
    pub fn quadrature(mut self) -> Self {
        self.mode = TransformMode::Quadrature;
        self.sup_cache = OnceLock::new();
        self
    }

    pub fn with_eps_dom(mut self, eps: f64) -> Result<Self> {
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(domain("eps_dom", eps, "must be positive"));
        }
        self.eps_dom = eps;
        Ok(self)
    }

    pub fn eta(&self) -> &EtaSpec {
        &self.eta
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn c0(&self) -> f64 {
        self.eta.c0()
    }

    pub fn mode(&self) -> TransformMode {
        self.mode
    }

    /// `(G(c0), sup G)`. In quadrature mode the supremum is `G(X_MAX)`,
    /// the largest value whose inverse is representable.
    pub fn range(&self) -> (f64, f64) {
        (self.g_floor(), self.g_sup())
    }

    fn g_floor(&self) -> f64 {
        match self.mode {
            TransformMode::ClosedForm => f64::NEG_INFINITY,
            TransformMode::LogPrimitive => {
                let prim = self.eta.log_primitive().unwrap();
                prim.lower - (prim.forward)(self.c.ln())
            }
            TransformMode::Quadrature => {
                if self.eta.eval(self.c0()) > 0.0 {
                    -self.integral(self.c0(), self.c)
                } else {
                    f64::NEG_INFINITY
                }
            }
        }
    }

    fn g_sup(&self) -> f64 {
        match self.mode {
            TransformMode::ClosedForm => f64::INFINITY,
            TransformMode::LogPrimitive => {
                let prim = self.eta.log_primitive().unwrap();
                prim.upper - (prim.forward)(self.c.ln())
            }
            TransformMode::Quadrature => *self
                .sup_cache
                .get_or_init(|| self.integral(self.c, X_MAX)),
        }
    }

    fn integrand_floor(&self) -> f64 {
        let c0 = self.c0();
        if self.eta.eval(c0) > 0.0 {
            // integrand is bounded at c0, so split relative to a point below it
            c0 - c0.max(1.0)
        } else {
            c0
        }
    }

    fn integral(&self, a: f64, b: f64) -> f64 {
        let eta = &self.eta;
        geometric_simpson(&|u| 1.0 / eta.eval(u), self.integrand_floor(), a, b, ABS_TOL)
    }

    /// `G(x)` for `x >= c0`.
    pub fn g(&self, x: f64) -> Result<f64> {
        let c0 = self.c0();
        if !(x >= c0) || x.is_nan() {
            return Err(domain("x", x, "below the domain floor c0"));
        }
        match self.mode {
            TransformMode::Quadrature => {
                if x == c0 || (x < c0 + self.eps_dom && self.eta.eval(c0) <= 0.0) {
                    return Ok(self.g_floor());
                }
                if x == f64::INFINITY {
                    return Ok(self.g_sup());
                }
                Ok(self.integral(self.c, x))
            }
            _ => self.g_of_ln(x.ln()),
        }
    }

    /// `G(e^l)`, evaluated without forming `e^l` where possible.
    pub fn g_of_ln(&self, l: f64) -> Result<f64> {
        let c0 = self.c0();
        let l0 = c0.ln();
        if !(l >= l0) {
            return Err(domain("ln x", l, "below the domain floor ln c0"));
        }
        let lc = self.c.ln();
        Ok(match self.mode {
            TransformMode::ClosedForm => {
                if l == l0 {
                    return Ok(f64::NEG_INFINITY);
                }
                match self.eta.kind() {
                    EtaKind::Linear => l - lc,
                    EtaKind::XLogX => l.ln() - lc.ln(),
                    EtaKind::XLogLogX => l.ln().ln() - lc.ln().ln(),
                    EtaKind::Numeric => unreachable!(),
                }
            }
            TransformMode::LogPrimitive => {
                let prim = self.eta.log_primitive().unwrap();
                if l == l0 {
                    prim.lower - (prim.forward)(lc)
                } else {
                    (prim.forward)(l) - (prim.forward)(lc)
                }
            }
            TransformMode::Quadrature => return self.g(l.exp()),
        })
    }

    /// `G^-1(y)`. Values at or below `G(c0)` map to `c0`; values above the
    /// range, or whose inverse is not representable, are an overflow error.
    pub fn g_inv(&self, y: f64) -> Result<f64> {
        if y.is_nan() {
            return Err(domain("y", y, "not a number"));
        }
        match self.mode {
            TransformMode::Quadrature => self.g_inv_numeric(y),
            _ => {
                let l = self.g_inv_ln(y)?;
                let x = l.exp();
                if x.is_finite() {
                    Ok(x)
                } else {
                    Err(Error::UpperRangeOverflow {
                        y,
                        sup: self.g_of_ln(f64::MAX.ln()).unwrap_or(f64::INFINITY),
                    })
                }
            }
        }
    }

    /// `ln G^-1(y)`; finite well beyond the range where `G^-1(y)` itself is.
    pub fn g_inv_ln(&self, y: f64) -> Result<f64> {
        if y.is_nan() {
            return Err(domain("y", y, "not a number"));
        }
        let c0 = self.c0();
        let lc = self.c.ln();
        let (floor, sup) = self.range();
        if y <= floor {
            return Ok(c0.ln());
        }
        if y > sup || (y == sup && sup.is_finite()) {
            return Err(Error::UpperRangeOverflow { y, sup });
        }
        let l = match self.mode {
            TransformMode::ClosedForm => match self.eta.kind() {
                EtaKind::Linear => lc + y,
                EtaKind::XLogX => lc * y.exp(),
                EtaKind::XLogLogX => (lc.ln() * y.exp()).exp(),
                EtaKind::Numeric => unreachable!(),
            },
            TransformMode::LogPrimitive => {
                let prim = self.eta.log_primitive().unwrap();
                (prim.inverse)(y + (prim.forward)(lc))
            }
            TransformMode::Quadrature => return Ok(self.g_inv_numeric(y)?.ln()),
        };
        if l.is_nan() || l == f64::INFINITY {
            return Err(Error::UpperRangeOverflow { y, sup });
        }
        Ok(l)
    }

    fn g_inv_numeric(&self, y: f64) -> Result<f64> {
        let c0 = self.c0();
        let (floor, sup) = self.range();
        if y <= floor {
            return Ok(c0);
        }
        if y >= sup {
            return Err(Error::UpperRangeOverflow { y, sup });
        }
        let (mut lo, mut glo, mut hi, mut ghi);
        let mut d = self.c - c0;
        if y >= 0.0 {
            lo = self.c;
            glo = 0.0;
            loop {
                d *= 2.0;
                hi = c0 + d;
                if hi > X_MAX {
                    hi = X_MAX;
                }
                ghi = glo + self.integral(lo, hi);
                if ghi >= y {
                    break;
                }
                if hi >= X_MAX {
                    return Err(Error::UpperRangeOverflow { y, sup });
                }
                lo = hi;
                glo = ghi;
            }
        } else {
            hi = self.c;
            ghi = 0.0;
            loop {
                d *= 0.5;
                if d < self.eps_dom {
                    if self.eta.eval(c0) > 0.0 {
                        lo = c0;
                        glo = floor;
                        break;
                    }
                    return Ok(c0);
                }
                lo = c0 + d;
                glo = ghi - self.integral(lo, hi);
                if glo <= y {
                    break;
                }
                hi = lo;
                ghi = glo;
            }
        }
        for _ in 0..BISECT_ITERS {
            if hi - lo <= BISECT_REL_WIDTH * hi.abs().max(f64::MIN_POSITIVE) {
                break;
            }
            let mid = 0.5 * (lo + hi);
            let gmid = glo + self.integral(lo, mid);
            if gmid < y {
                lo = mid;
                glo = gmid;
            } else {
                hi = mid;
                ghi = gmid;
            }
        }
        // linear interpolation inside the final bracket
        let w = if ghi > glo { ((y - glo) / (ghi - glo)).clamp(0.0, 1.0) } else { 0.5 };
        Ok(lo + w * (hi - lo))
    }

    /// `G^-1(G(x) - kappa a)`, with `c0` when the argument leaves the range.
    pub fn damped(&self, x: f64, a: f64, kappa: f64) -> Result<f64> {
        if self.mode == TransformMode::Quadrature {
            check_damping(a, kappa)?;
            let g = self.g(x)?;
            if kappa * a == 0.0 {
                return Ok(x);
            }
            return self.g_inv(g - kappa * a);
        }
        if !(x >= self.c0()) {
            return Err(domain("x", x, "below the domain floor c0"));
        }
        if kappa * a == 0.0 {
            check_damping(a, kappa)?;
            return Ok(x);
        }
        Ok(self.damped_ln(x.ln(), a, kappa)?.exp())
    }

    /// `ln G^-1(G(e^l) - kappa a)` from the log value `l`.
    pub fn damped_ln(&self, l: f64, a: f64, kappa: f64) -> Result<f64> {
        check_damping(a, kappa)?;
        let l0 = self.c0().ln();
        if !(l >= l0) {
            return Err(domain("ln x", l, "below the domain floor ln c0"));
        }
        let s = kappa * a;
        if s == 0.0 || l == f64::INFINITY {
            return Ok(l);
        }
        if l == l0 {
            return Ok(l0);
        }
        Ok(match self.mode {
            TransformMode::ClosedForm => match self.eta.kind() {
                EtaKind::Linear => l - s,
                EtaKind::XLogX => l * (-s).exp(),
                EtaKind::XLogLogX => l.powf((-s).exp()),
                EtaKind::Numeric => unreachable!(),
            },
            TransformMode::LogPrimitive => {
                let prim = self.eta.log_primitive().unwrap();
                let z = (prim.forward)(l) - s;
                if z <= prim.lower {
                    l0
                } else {
                    (prim.inverse)(z)
                }
            }
            TransformMode::Quadrature => self.damped(l.exp(), a, kappa)?.ln(),
        })
    }

    /// `(1 - p) G(x^(1/p))`, the transform built from `eta_p` with
    /// reference point `c^p`.
    pub fn tilde_g_p(&self, p: PExponent, x: f64) -> Result<f64> {
        let pv = p.get();
        if !(x > 0.0) {
            return Err(domain("x", x, "must be positive"));
        }
        let g = match self.mode {
            TransformMode::Quadrature => self.g(x.powf(1.0 / pv))?,
            _ => self.g_of_ln(x.ln() / pv)?,
        };
        Ok((1.0 - pv) * g)
    }

    /// `int_{c^p}^x du / eta_p(u)` by direct quadrature; the cross-check
    /// route for [`BoundTransform::tilde_g_p`].
    pub fn tilde_g_p_direct(&self, p: PExponent, x: f64) -> Result<f64> {
        let pv = p.get();
        let floor = self.c0().powf(pv);
        if !(x > floor) {
            return Err(domain("x", x, "must exceed c0^p"));
        }
        let eta = &self.eta;
        let f = |u: f64| 1.0 / eta_p_value(eta, pv, u);
        let split = if eta.eval(self.c0()) > 0.0 { floor - floor.max(1.0) } else { floor };
        Ok(geometric_simpson(&f, split, self.c.powf(pv), x, ABS_TOL * 1e-2))
    }
}

fn check_damping(a: f64, kappa: f64) -> Result<()> {
    if !(a >= 0.0) {
        return Err(domain("a", a, "integrator value must be nonnegative"));
    }
    if !(kappa >= 0.0 && kappa.is_finite()) {
        return Err(domain("kappa", kappa, "must be finite and nonnegative"));
    }
    Ok(())
}

fn eta_p_value(eta: &EtaSpec, p: f64, x: f64) -> f64 {
    let y = x.powf(1.0 / p);
    p / (1.0 - p) * eta.eval(y) * x / y
}

/// `G(x)` for the given transform.
pub fn eval_g(t: &BoundTransform, x: f64) -> Result<f64> {
    t.g(x)
}

pub fn eval_g_inv(t: &BoundTransform, y: f64) -> Result<f64> {
    t.g_inv(y)
}

/// `eta_p(x) = p/(1-p) eta(x^(1/p)) x^(1 - 1/p)`.
pub fn eval_eta_p(eta: &EtaSpec, p: PExponent, x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(domain("x", x, "must be positive"));
    }
    let pv = p.get();
    if x.powf(1.0 / pv) < eta.c0() {
        return Err(domain("x", x, "x^(1/p) is below the domain floor c0"));
    }
    Ok(eta_p_value(eta, pv, x))
}

pub fn eval_tilde_g_p(eta: &EtaSpec, p: PExponent, c: f64, x: f64) -> Result<f64> {
    BoundTransform::new(eta.clone(), c)?.tilde_g_p(p, x)
}

/// `G^-1(G(x) - kappa a)`.
pub fn damped_bound(t: &BoundTransform, x: f64, a: f64, kappa: f64) -> Result<f64> {
    t.damped(x, a, kappa)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::E;

    use proptest::prelude::*;

    use super::*;
    use crate::bounds::eta::EtaShape;

    fn square() -> EtaSpec {
        EtaSpec::numeric(
            "x^2",
            0.0,
            |x| x * x,
            EtaShape {
                convex: true,
                concave: false,
                zero_at_floor: true,
            },
        )
        .unwrap()
    }

    fn sqrt_plus_one() -> EtaSpec {
        EtaSpec::numeric(
            "1 + sqrt x",
            0.0,
            |x: f64| 1.0 + x.sqrt(),
            EtaShape {
                convex: false,
                concave: true,
                zero_at_floor: false,
            },
        )
        .unwrap()
    }

    fn transforms() -> Vec<BoundTransform> {
        let mut v: Vec<BoundTransform> = EtaSpec::catalog()
            .into_iter()
            .map(BoundTransform::with_default_reference)
            .collect();
        v.push(BoundTransform::new(square(), 1.0).unwrap());
        v.push(BoundTransform::new(sqrt_plus_one(), 1.0).unwrap());
        v.push(BoundTransform::with_default_reference(
            EtaSpec::squared_gaussian_exponent(0.5).unwrap(),
        ));
        v
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn linear_closed_form() {
        let t = BoundTransform::with_default_reference(EtaSpec::linear());
        assert!((t.g(E).unwrap() - 1.0).abs() < 1e-15);
        assert!((t.g_inv(1.0).unwrap() - E).abs() < 1e-15);
        assert_eq!(t.g(0.0).unwrap(), f64::NEG_INFINITY);
        assert_eq!(t.g_inv(f64::NEG_INFINITY).unwrap(), 0.0);
    }

    #[test]
    fn x_log_x_closed_form() {
        let t = BoundTransform::with_default_reference(EtaSpec::x_log_x());
        assert!((t.g(E.exp()).unwrap() - 1.0).abs() < 1e-15);
        assert!((t.g_inv(0.0).unwrap() - E).abs() < 1e-15);
    }

    #[test]
    fn g_vanishes_at_reference() {
        for t in transforms() {
            assert!(t.g(t.c()).unwrap().abs() < 1e-14, "{:?}", t.eta());
        }
    }

    #[test]
    fn square_numeric_against_analytic() {
        // G(x) = 1 - 1/x for eta = x^2, c = 1
        let t = BoundTransform::new(square(), 1.0).unwrap();
        assert_eq!(t.mode(), TransformMode::Quadrature);
        assert!((t.g(2.0).unwrap() - 0.5).abs() < 1e-10);
        assert!((t.g_inv(0.5).unwrap() - 2.0).abs() < 1e-9);
        for x in [0.01, 0.3, 5.0, 1e3, 1e8] {
            assert!((t.g(x).unwrap() - (1.0 - 1.0 / x)).abs() < 1e-9, "x={x}");
        }
        let (lo, hi) = t.range();
        assert_eq!(lo, f64::NEG_INFINITY);
        assert!((hi - 1.0).abs() < 1e-9);
        assert!(matches!(t.g_inv(1.5), Err(Error::UpperRangeOverflow { .. })));
    }

    #[test]
    fn numeric_floor_is_finite_when_eta_positive_at_c0() {
        let t = BoundTransform::new(sqrt_plus_one(), 1.0).unwrap();
        let (lo, _) = t.range();
        assert!(lo.is_finite() && lo < 0.0);
        assert_eq!(t.g(0.0).unwrap(), lo);
        assert_eq!(t.g_inv(lo - 1.0).unwrap(), 0.0);
        let x = t.g_inv(lo + 1e-3).unwrap();
        assert!(x > 0.0 && x < 0.01);
    }

    #[test]
    fn below_floor_is_domain_error() {
        let t = BoundTransform::with_default_reference(EtaSpec::x_log_x());
        assert!(matches!(t.g(0.5), Err(Error::Domain { .. })));
        assert!(BoundTransform::new(EtaSpec::x_log_x(), 1.0).is_err());
    }

    #[test]
    fn closed_form_matches_quadrature() {
        for eta in EtaSpec::catalog() {
            let c = eta.default_reference();
            let closed = BoundTransform::new(eta.clone(), c).unwrap();
            let quad = BoundTransform::new(eta, c).unwrap().quadrature();
            for x in [c * 1.01, c * 3.0, c * 50.0, 1e6] {
                let (a, b) = (closed.g(x).unwrap(), quad.g(x).unwrap());
                assert!((a - b).abs() < 1e-9, "{:?} x={x}: {a} vs {b}", closed.eta());
            }
        }
    }

    #[test]
    fn counterexample_primitive_matches_quadrature() {
        let eta = EtaSpec::squared_gaussian_exponent(0.7).unwrap();
        let prim = BoundTransform::new(eta.clone(), 1.0).unwrap();
        assert_eq!(prim.mode(), TransformMode::LogPrimitive);
        let quad = BoundTransform::new(eta, 1.0).unwrap().quadrature();
        for x in [0.05, 0.5, 1.5, 20.0, 1e5] {
            let (a, b) = (prim.g(x).unwrap(), quad.g(x).unwrap());
            assert!((a - b).abs() < 1e-9, "x={x}: {a} vs {b}");
        }
    }

    #[test]
    fn eta_p_closed_forms() {
        let p = PExponent::new(0.5).unwrap();
        assert!((eval_eta_p(&EtaSpec::linear(), p, 3.0).unwrap() - 3.0).abs() < 1e-14);
        let p = PExponent::new(0.3).unwrap();
        for x in [1.5, 4.0, 100.0] {
            let lin = eval_eta_p(&EtaSpec::linear(), p, x).unwrap();
            assert!(rel(lin, 0.3 / 0.7 * x) < 1e-13);
            let xl = eval_eta_p(&EtaSpec::x_log_x(), p, x).unwrap();
            assert!(rel(xl, x * x.ln() / 0.7) < 1e-13);
        }
        assert!(eval_eta_p(&EtaSpec::linear(), p, 0.0).is_err());
    }

    #[test]
    fn tilde_g_p_examples() {
        let p = PExponent::new(0.5).unwrap();
        let v = eval_tilde_g_p(&EtaSpec::linear(), p, 1.0, E).unwrap();
        assert!((v - 1.0).abs() < 1e-15);
        let t = BoundTransform::new(square(), 1.0).unwrap();
        let (a, b) = (t.tilde_g_p(p, 4.0).unwrap(), t.tilde_g_p_direct(p, 4.0).unwrap());
        assert!((a - b).abs() < 1e-9, "{a} vs {b}");
        // (1 - p)(1 - 1/16)
        assert!((a - 0.5 * (1.0 - 1.0 / 16.0)).abs() < 1e-10);
    }

    #[test]
    fn tilde_g_p_routes_agree_on_catalog() {
        for pv in [0.2, 0.5, 0.8] {
            let p = PExponent::new(pv).unwrap();
            for t in transforms() {
                let lo = t.c().powf(pv);
                for i in 0..12 {
                    let x = lo * (1.0 + 0.05 * 2f64.powi(i));
                    let a = t.tilde_g_p(p, x).unwrap();
                    let b = t.tilde_g_p_direct(p, x).unwrap();
                    assert!((a - b).abs() <= 1e-10, "{:?} p={pv} x={x}: {a} vs {b}", t.eta());
                }
            }
        }
    }

    #[test]
    fn damped_examples() {
        let lin = BoundTransform::with_default_reference(EtaSpec::linear());
        let v = lin.damped(10.0, 1.0, 2.0).unwrap();
        assert!((v - 10.0 * (-2.0f64).exp()).abs() < 1e-13);
        assert!((v - 1.353_352_832_366_127).abs() < 1e-12);
        assert_eq!(lin.damped(10.0, 5.0, 0.0).unwrap(), 10.0);

        let xl = BoundTransform::with_default_reference(EtaSpec::x_log_x());
        let v = xl.damped(4f64.exp(), 2f64.ln(), 1.0).unwrap();
        assert!(rel(v, E * E) < 1e-14);
        let q = BoundTransform::with_default_reference(EtaSpec::x_log_x()).quadrature();
        let w = q.damped(4f64.exp(), 2f64.ln(), 1.0).unwrap();
        assert!(rel(w, E * E) < 1e-9, "{w}");
    }

    #[test]
    fn damped_ln_handles_huge_values() {
        let t = BoundTransform::with_default_reference(EtaSpec::x_log_log_x());
        // x = exp(exp(700)) is far beyond f64, its damped log value is not
        let l = 700f64.exp();
        let out = t.damped_ln(l, 1.0, 2.0).unwrap();
        assert!(rel(out, (700.0 * (-2.0f64).exp()).exp()) < 1e-12);
    }

    #[test]
    fn damped_drops_to_floor() {
        let t = BoundTransform::new(sqrt_plus_one(), 1.0).unwrap();
        assert_eq!(t.damped(2.0, 100.0, 1.0).unwrap(), 0.0);
        let ce = BoundTransform::with_default_reference(EtaSpec::squared_gaussian_exponent(0.5).unwrap());
        assert!(ce.damped(2.0, 40.0, 2.0).unwrap() > 0.0);
    }

    #[test]
    fn g_inv_overflow_is_reported() {
        let t = BoundTransform::with_default_reference(EtaSpec::x_log_x());
        assert!(matches!(t.g_inv(10.0), Err(Error::UpperRangeOverflow { .. })));
        assert!(t.g_inv_ln(10.0).unwrap().is_finite());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn roundtrip(idx in 0usize..6, u in 0.0f64..1.0) {
            let t = &transforms()[idx];
            // log grid on [c0 + 1e-3, c0 + 1e4]
            let x = t.c0() + (1e-3f64.ln() + u * (1e7f64.ln())).exp();
            let back = t.g_inv(t.g(x).unwrap()).unwrap();
            prop_assert!(rel(back, x) <= 1e-9, "{:?} x={} back={}", t.eta(), x, back);
        }

        #[test]
        fn g_is_concave(idx in 0usize..6, u1 in 0.0f64..1.0, u2 in 0.0f64..1.0) {
            let t = &transforms()[idx];
            let x1 = t.c0() + (-5.0 + 12.0 * u1).exp();
            let x2 = t.c0() + (-5.0 + 12.0 * u2).exp();
            let mid = t.g(0.5 * (x1 + x2)).unwrap();
            prop_assert!(mid >= 0.5 * (t.g(x1).unwrap() + t.g(x2).unwrap()) - 1e-9);
        }

        #[test]
        fn g_strictly_increasing(idx in 0usize..6, u in 0.0f64..1.0) {
            let t = &transforms()[idx];
            let x = t.c0() + (-5.0 + 12.0 * u).exp();
            prop_assert!(t.g(x * 1.001 + 1e-9).unwrap() > t.g(x).unwrap());
        }

        #[test]
        fn reference_point_invariance(idx in 0usize..6, u in 0.0f64..1.0, a in 0.0f64..3.0) {
            let t = &transforms()[idx];
            let t2 = BoundTransform::new(t.eta().clone(), 2.0 * t.c()).unwrap();
            let t2 = if t.mode() == TransformMode::Quadrature { t2.quadrature() } else { t2 };
            let x = t.c0() + (-2.0 + 8.0 * u).exp();
            let d1 = t.damped(x, a, 1.0).unwrap();
            let d2 = t2.damped(x, a, 1.0).unwrap();
            prop_assert!((d1 - d2).abs() <= 1e-9 * d1.abs().max(1e-300) || d1 == d2,
                "{:?} x={} a={}: {} vs {}", t.eta(), x, a, d1, d2);
        }

        #[test]
        fn damped_monotone(idx in 0usize..6, u in 0.0f64..1.0, a in 0.0f64..3.0, dx in 0.0f64..2.0, da in 0.0f64..1.0) {
            let t = &transforms()[idx];
            let x = t.c0() + (-2.0 + 8.0 * u).exp();
            let base = t.damped(x, a, 1.5).unwrap();
            prop_assert!(t.damped(x + dx, a, 1.5).unwrap() >= base * (1.0 - 1e-12));
            prop_assert!(t.damped(x, a + da, 1.5).unwrap() <= base * (1.0 + 1e-12));
        }
    }
}
