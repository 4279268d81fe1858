//! Adaptive Simpson quadrature with interval bisection.

/// Default absolute tolerance for integrals of `1/eta`.
pub const ABS_TOL: f64 = 1e-10;
/// Maximum bisection depth.
pub const MAX_DEPTH: u32 = 60;
const PIECE_REL_TOL: f64 = 1e-13;

/// Integrates `f` over `[a, b]` to absolute tolerance `tol`.
///
/// `b < a` is allowed and yields the negated integral.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    if b < a {
        return -adaptive_simpson(f, b, a, tol);
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    refine(f, a, b, fa, fm, fb, whole, tol, MAX_DEPTH)
}

#[allow(clippy::too_many_arguments)]
fn refine<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    // the absolute target is relaxed to roundoff level for huge integrals
    let target = tol.max(1e-14 * (left + right).abs());
    if depth == 0 || delta.abs() <= 15.0 * target || m <= a || m >= b {
        // Richardson step
        return left + right + delta / 15.0;
    }
    refine(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + refine(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// Integrates over `[a, b]` (both strictly above `floor`) by splitting the
/// range into pieces whose distance to `floor` changes by at most a factor
/// of two. Suited to integrands that are singular or steep near `floor`
/// and slowly varying far from it.
pub fn geometric_simpson<F: Fn(f64) -> f64>(f: &F, floor: f64, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    if b < a {
        return -geometric_simpson(f, floor, b, a, tol);
    }
    let (da, db) = (a - floor, b - floor);
    let pieces = ((db / da).log2().ceil().max(1.0)) as usize;
    let ratio = (db / da).powf(1.0 / pieces as f64);
    let piece_tol = tol / pieces as f64;
    let mut total = 0.0;
    let mut lo = a;
    let mut d = da;
    for i in 0..pieces {
        let hi = if i + 1 == pieces { b } else { floor + d * ratio };
        // pieces far from the floor can be tiny; keep them accurate relative to their size
        let coarse = (hi - lo) / 6.0 * (f(lo) + 4.0 * f(0.5 * (lo + hi)) + f(hi));
        let tol_here = piece_tol.min(PIECE_REL_TOL * coarse.abs()).max(f64::MIN_POSITIVE);
        total += adaptive_simpson(f, lo, hi, tol_here);
        lo = hi;
        d *= ratio;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let v = adaptive_simpson(&|x: f64| 3.0 * x * x, 0.0, 2.0, 1e-12);
        assert!((v - 8.0).abs() < 1e-13);
    }

    #[test]
    fn reversed_limits_negate() {
        let f = |x: f64| x.exp();
        let a = adaptive_simpson(&f, 0.0, 1.0, 1e-12);
        let b = adaptive_simpson(&f, 1.0, 0.0, 1e-12);
        assert_eq!(a, -b);
        assert!((a - (1f64.exp() - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn inverse_square_over_wide_range() {
        // int_1^1e6 du/u^2 = 1 - 1e-6
        let v = geometric_simpson(&|u: f64| 1.0 / (u * u), 0.0, 1.0, 1e6, 1e-12);
        assert!((v - (1.0 - 1e-6)).abs() < 1e-12, "{v}");
    }

    #[test]
    fn log_singularity_near_floor() {
        // int_{1+1e-6}^{e} du/(u ln u) = ln(1) - ln(ln(1+1e-6))
        let a = 1.0 + 1e-6;
        let v = geometric_simpson(&|u: f64| 1.0 / (u * u.ln()), 1.0, a, 1f64.exp(), 1e-11);
        let exact = -(a.ln()).ln();
        assert!((v - exact).abs() < 1e-9, "{v} vs {exact}");
    }
}
