//! Deterministic Bihari-LaSalle bound `G^-1(G(H) + A_t)` and an RK4
//! comparison oracle for `x' = eta(x) A'(t)`.

use serde::Serialize;

use crate::bounds::{BoundTransform, EtaSpec};
use crate::error::{domain, Error, Result};

pub const DEFAULT_CEILING: f64 = 1e12;

/// `x(t) <= int_0^t eta(x(s)) dA(s) + H` on a grid.
#[derive(Debug, Clone)]
pub struct DetProblem {
    pub eta: EtaSpec,
    pub h: f64,
    /// Grid times from 0; `A` is piecewise linear between them.
    pub times: Vec<f64>,
    pub a: Vec<f64>,
}

impl DetProblem {
    pub fn new(eta: EtaSpec, h: f64, times: Vec<f64>, a: Vec<f64>) -> Result<Self> {
        if times.len() != a.len() || times.is_empty() {
            return Err(Error::Invalid("time grid and A must have equal nonzero length".into()));
        }
        if times[0] != 0.0 || a[0] != 0.0 {
            return Err(Error::Invalid("grid must start at t = 0 with A(0) = 0".into()));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Invalid("time grid must be strictly increasing".into()));
        }
        if a.windows(2).any(|w| !(w[1] >= w[0])) {
            return Err(Error::Invalid("A must be nondecreasing".into()));
        }
        if !(h >= eta.c0()) {
            return Err(domain("H", h, "below the domain floor c0"));
        }
        Ok(Self { eta, h, times, a })
    }

    /// Samples a closed-form `A` on a uniform grid of `n` steps over `[0, t_end]`.
    pub fn uniform(eta: EtaSpec, h: f64, a: impl Fn(f64) -> f64, t_end: f64, n: usize) -> Result<Self> {
        if !(t_end > 0.0) || n == 0 {
            return Err(domain("T", t_end, "horizon must be positive"));
        }
        let times: Vec<f64> = (0..=n).map(|i| t_end * i as f64 / n as f64).collect();
        let values = times.iter().map(|&t| a(t)).collect();
        Self::new(eta, h, times, values)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DetBound {
    /// Grid times up to and including the horizon.
    pub times: Vec<f64>,
    pub bound: Vec<f64>,
    /// Last grid time at which `G(H) + A_t` lies strictly inside range(G).
    pub horizon: f64,
}

/// `t -> G^-1(G(H) + A_t)` up to the blow-up horizon.
pub fn bihari_bound(prob: &DetProblem) -> DetBound {
    let t = BoundTransform::with_default_reference(prob.eta.clone());
    let gh = t.g(prob.h).expect("H >= c0 checked at construction");
    let (_, sup) = t.range();
    let mut out = DetBound {
        times: Vec::with_capacity(prob.times.len()),
        bound: Vec::with_capacity(prob.times.len()),
        horizon: 0.0,
    };
    for (&time, &a) in prob.times.iter().zip(&prob.a) {
        let y = gh + a;
        if !(y < sup) {
            break;
        }
        let value = if a == 0.0 { prob.h } else {
            match t.g_inv(y) {
                Ok(v) => v,
                Err(_) => break,
            }
        };
        out.times.push(time);
        out.bound.push(value);
        out.horizon = time;
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct OdePath {
    pub times: Vec<f64>,
    pub x: Vec<f64>,
    /// Time at which the ceiling was crossed, if it was.
    pub blow_up: Option<f64>,
}

/// Classical RK4 for `x' = eta(x) A'(t)`, `x(0) = H`, stopping when `x`
/// exceeds `ceiling`.
pub fn ode_comparison_oracle(
    eta: &EtaSpec,
    h: f64,
    a_prime: impl Fn(f64) -> f64,
    t_end: f64,
    dt: f64,
    ceiling: f64,
) -> Result<OdePath> {
    if !(dt > 0.0) {
        return Err(domain("dt", dt, "step must be positive"));
    }
    if !(t_end > 0.0) {
        return Err(domain("T", t_end, "horizon must be positive"));
    }
    let rhs = |t: f64, x: f64| eta.eval(x) * a_prime(t);
    let steps = (t_end / dt).round().max(1.0) as usize;
    let dt = t_end / steps as f64;
    let mut times = Vec::with_capacity(steps + 1);
    let mut xs = Vec::with_capacity(steps + 1);
    let mut x = h;
    times.push(0.0);
    xs.push(x);
    for i in 0..steps {
        let t = i as f64 * dt;
        let k1 = rhs(t, x);
        let k2 = rhs(t + 0.5 * dt, x + 0.5 * dt * k1);
        let k3 = rhs(t + 0.5 * dt, x + 0.5 * dt * k2);
        let k4 = rhs(t + dt, x + dt * k3);
        x += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        let t_next = (i + 1) as f64 * dt;
        if !x.is_finite() || x > ceiling {
            return Ok(OdePath { times, x: xs, blow_up: Some(t_next) });
        }
        times.push(t_next);
        xs.push(x);
    }
    Ok(OdePath { times, x: xs, blow_up: None })
}
