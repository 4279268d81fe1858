//! Euler–Maruyama for path-dependent SDEs `dX = f(t, X) dt + g(t, X) dB`
//! with a scalar observable decomposed into the `(A, M, H)` channels.

use std::fmt;
use std::sync::Arc;

use rand::Rng;

use super::path::{AssumptionTag, SimPath};
use crate::bounds::EtaSpec;
use crate::error::{domain, Error, Result};
use crate::rng::{standard_normal, RngStream};

/// Writes a coefficient into the output slice: `d` entries for the drift,
/// `d * m` row-major entries for the diffusion.
pub type Coefficient = Arc<dyn Fn(f64, &PathView, &mut [f64]) + Send + Sync>;
pub type SegmentFn = Arc<dyn Fn(f64, &mut [f64]) + Send + Sync>;
pub type RateFn = Arc<dyn Fn(f64, &PathView) -> f64 + Send + Sync>;

type ValueFn = Arc<dyn Fn(f64, &[f64]) -> f64 + Send + Sync>;
type VectorFn = Arc<dyn Fn(f64, &[f64], &mut [f64]) + Send + Sync>;

const SEGMENT_SAMPLES: usize = 256;

/// The state up to the current time as seen by the coefficients.
pub struct PathView<'a> {
    pub t: f64,
    pub x: &'a [f64],
    /// `sup_{s <= t} |x(s)|` over the initial segment and the grid so far.
    pub sup_norm: f64,
    /// Coordinatewise `sup_{s <= t} |x_i(s)|`.
    pub sup_abs: &'a [f64],
    history: &'a [f64],
    dt: f64,
    initial: &'a InitialSegment,
}

impl PathView<'_> {
    pub fn dim(&self) -> usize {
        self.x.len()
    }

    /// `x(s)` for `s <= t`: the initial segment for `s <= 0`, otherwise the
    /// grid value at or before `s`.
    pub fn at(&self, s: f64, out: &mut [f64]) {
        let d = self.x.len();
        if s <= 0.0 {
            self.initial.value(s, out);
            return;
        }
        let n = self.history.len() / d;
        let i = ((s / self.dt).floor() as usize).min(n - 1);
        out.copy_from_slice(&self.history[i * d..(i + 1) * d]);
    }
}

#[derive(Clone)]
pub enum InitialSegment {
    Constant(Vec<f64>),
    /// `z(s)` for `s in [-lag, 0]`.
    Function { lag: f64, z: SegmentFn, dim: usize },
}

impl fmt::Debug for InitialSegment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Constant(x) => f.debug_tuple("Constant").field(x).finish(),
            Self::Function { lag, dim, .. } => f.debug_struct("Function").field("lag", lag).field("dim", dim).finish(),
        }
    }
}

impl InitialSegment {
    pub fn dim(&self) -> usize {
        match self {
            Self::Constant(x) => x.len(),
            Self::Function { dim, .. } => *dim,
        }
    }

    pub fn value(&self, s: f64, out: &mut [f64]) {
        match self {
            Self::Constant(x) => out.copy_from_slice(x),
            Self::Function { lag, z, .. } => z(s.max(-lag).min(0.0), out),
        }
    }

    /// Sampled coordinatewise and Euclidean suprema of `|z|`.
    fn sup(&self) -> (Vec<f64>, f64) {
        let d = self.dim();
        let mut buf = vec![0.0; d];
        let mut abs = vec![0.0f64; d];
        let mut norm = 0.0f64;
        let lag = match self {
            Self::Constant(_) => 0.0,
            Self::Function { lag, .. } => *lag,
        };
        let n = if lag > 0.0 { SEGMENT_SAMPLES } else { 0 };
        for i in 0..=n {
            let s = if n == 0 { 0.0 } else { -lag + lag * i as f64 / n as f64 };
            self.value(s, &mut buf);
            for (a, v) in abs.iter_mut().zip(&buf) {
                *a = a.max(v.abs());
            }
            norm = norm.max(euclid(&buf));
        }
        (abs, norm)
    }
}

fn euclid(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// A `C^{1,2}` function `U(t, x)` with gradient and Hessian in `x`.
#[derive(Clone)]
pub struct ScalarField {
    label: String,
    dim: usize,
    value: ValueFn,
    grad: VectorFn,
    hess: VectorFn,
    time_derivative: Option<ValueFn>,
}

impl fmt::Debug for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarField").field("label", &self.label).field("dim", &self.dim).finish()
    }
}

impl ScalarField {
    /// `hess` fills a row-major `dim x dim` matrix.
    pub fn new(label: impl Into<String>, dim: usize, value: ValueFn, grad: VectorFn, hess: VectorFn) -> Self {
        Self { label: label.into(), dim, value, grad, hess, time_derivative: None }
    }

    pub fn with_time_derivative(mut self, dt: ValueFn) -> Self {
        self.time_derivative = Some(dt);
        self
    }

    /// `U(x) = x_i`.
    pub fn coordinate(dim: usize, i: usize) -> Self {
        Self::new(
            format!("x[{i}]"),
            dim,
            Arc::new(move |_, x| x[i]),
            Arc::new(move |_, _, g| {
                g.fill(0.0);
                g[i] = 1.0;
            }),
            Arc::new(|_, _, h| h.fill(0.0)),
        )
    }

    /// `U(x) = r |x|^2`.
    pub fn squared_norm(dim: usize, r: f64) -> Self {
        Self::new(
            format!("{r}|x|^2"),
            dim,
            Arc::new(move |_, x| r * x.iter().map(|v| v * v).sum::<f64>()),
            Arc::new(move |_, x, g| {
                for (g, v) in g.iter_mut().zip(x) {
                    *g = 2.0 * r * v;
                }
            }),
            Arc::new(move |_, x, h| {
                let d = x.len();
                h.fill(0.0);
                for i in 0..d {
                    h[i * d + i] = 2.0 * r;
                }
            }),
        )
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn value(&self, t: f64, x: &[f64]) -> f64 {
        (self.value)(t, x)
    }

    pub fn grad(&self, t: f64, x: &[f64], out: &mut [f64]) {
        (self.grad)(t, x, out)
    }

    pub fn hess(&self, t: f64, x: &[f64], out: &mut [f64]) {
        (self.hess)(t, x, out)
    }

    pub fn time_derivative(&self, t: f64, x: &[f64]) -> f64 {
        self.time_derivative.as_ref().map_or(0.0, |d| d(t, x))
    }
}

/// How the observable `X = U(t, x)` is split into `A`, `M` and `H`.
#[derive(Clone)]
pub struct Decomposition {
    pub observable: ScalarField,
    pub eta: EtaSpec,
    pub a_rate: RateFn,
    pub tag: AssumptionTag,
}

impl fmt::Debug for Decomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Decomposition")
            .field("observable", &self.observable)
            .field("eta", &self.eta)
            .field("tag", &self.tag)
            .finish()
    }
}

impl Decomposition {
    /// `dA = dt`.
    pub fn new(observable: ScalarField, eta: EtaSpec, tag: AssumptionTag) -> Self {
        Self { observable, eta, a_rate: Arc::new(|_, _| 1.0), tag }
    }

    pub fn with_constant_rate(mut self, rate: f64) -> Self {
        self.a_rate = Arc::new(move |_, _| rate);
        self
    }

    pub fn with_a_rate(mut self, rate: RateFn) -> Self {
        self.a_rate = rate;
        self
    }
}

#[derive(Clone)]
pub struct PathSdeSpec {
    dim: usize,
    driver_dim: usize,
    drift: Coefficient,
    diffusion: Coefficient,
    memory: f64,
    initial: InitialSegment,
    init_sup_abs: Vec<f64>,
    init_sup_norm: f64,
    decomposition: Decomposition,
}

impl fmt::Debug for PathSdeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PathSdeSpec")
            .field("dim", &self.dim)
            .field("driver_dim", &self.driver_dim)
            .field("memory", &self.memory)
            .field("initial", &self.initial)
            .field("decomposition", &self.decomposition)
            .finish()
    }
}

impl PathSdeSpec {
    /// Observable defaults to the first coordinate with `eta(x) = x`,
    /// `A = t` and the nosup tag.
    pub fn new(driver_dim: usize, drift: Coefficient, diffusion: Coefficient, initial: InitialSegment) -> Result<Self> {
        let dim = initial.dim();
        if dim == 0 || driver_dim == 0 {
            return Err(Error::Invalid("dimensions must be positive".into()));
        }
        let (init_sup_abs, init_sup_norm) = initial.sup();
        if !init_sup_norm.is_finite() {
            return Err(Error::Invalid("initial segment is not finite".into()));
        }
        let memory = match &initial {
            InitialSegment::Constant(_) => 0.0,
            InitialSegment::Function { lag, .. } => *lag,
        };
        Ok(Self {
            dim,
            driver_dim,
            drift,
            diffusion,
            memory,
            initial,
            init_sup_abs,
            init_sup_norm,
            decomposition: Decomposition::new(ScalarField::coordinate(dim, 0), EtaSpec::linear(), AssumptionTag::NoSup),
        })
    }

    pub fn with_decomposition(mut self, decomposition: Decomposition) -> Result<Self> {
        if decomposition.observable.dim() != self.dim {
            return Err(Error::Invalid(format!(
                "observable has dimension {}, state has {}",
                decomposition.observable.dim(),
                self.dim
            )));
        }
        self.decomposition = decomposition;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn driver_dim(&self) -> usize {
        self.driver_dim
    }

    pub fn memory(&self) -> f64 {
        self.memory
    }

    pub fn initial(&self) -> &InitialSegment {
        &self.initial
    }

    pub fn decomposition(&self) -> &Decomposition {
        &self.decomposition
    }

    pub fn drift(&self, t: f64, view: &PathView, out: &mut [f64]) {
        (self.drift)(t, view, out)
    }

    pub fn diffusion(&self, t: f64, view: &PathView, out: &mut [f64]) {
        (self.diffusion)(t, view, out)
    }
}

/// Coefficients at the left point of one step, passed to observers.
pub struct StepInfo<'a> {
    pub view: &'a PathView<'a>,
    pub f: &'a [f64],
    /// Row-major `d x m`.
    pub g: &'a [f64],
    pub dt: f64,
}

fn step_grid(t_end: f64, dt: f64) -> Result<(usize, f64)> {
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(domain("T", t_end, "horizon must be positive"));
    }
    if !(dt > 0.0) {
        return Err(domain("dt", dt, "step must be positive"));
    }
    let steps = (t_end / dt).round().max(1.0) as usize;
    Ok((steps, t_end / steps as f64))
}

/// Explicit Euler–Maruyama path on `[0, T]` with step close to `dt`.
pub fn euler_maruyama(spec: &PathSdeSpec, t_end: f64, dt: f64, stream: RngStream) -> Result<SimPath> {
    let mut rng = stream.rng();
    euler_maruyama_with(spec, t_end, dt, &mut rng, None)
}

/// [`euler_maruyama`] drawing from `rng`, calling `observer` before every step.
pub fn euler_maruyama_with<R: Rng + ?Sized>(
    spec: &PathSdeSpec,
    t_end: f64,
    dt: f64,
    rng: &mut R,
    observer: Option<&mut dyn FnMut(&StepInfo)>,
) -> Result<SimPath> {
    let (_, h) = step_grid(t_end, dt)?;
    let sq = h.sqrt();
    euler_maruyama_driven(spec, t_end, dt, &mut |dw: &mut [f64]| dw.iter_mut().for_each(|w| *w = sq * standard_normal(rng)), observer)
}

/// [`euler_maruyama`] with Brownian increments supplied by `noise`, which
/// fills `m` increments of variance equal to the effective step.
pub fn euler_maruyama_driven(
    spec: &PathSdeSpec,
    t_end: f64,
    dt: f64,
    noise: &mut dyn FnMut(&mut [f64]),
    mut observer: Option<&mut dyn FnMut(&StepInfo)>,
) -> Result<SimPath> {
    let (steps, h) = step_grid(t_end, dt)?;
    let (d, m) = (spec.dim, spec.driver_dim);
    let dec = &spec.decomposition;
    let u = &dec.observable;

    let mut x = vec![0.0; d];
    spec.initial.value(0.0, &mut x);
    let mut history = Vec::with_capacity(d * (steps + 1));
    history.extend_from_slice(&x);
    let mut sup_abs = spec.init_sup_abs.clone();
    let mut sup_norm = spec.init_sup_norm;
    for (s, v) in sup_abs.iter_mut().zip(&x) {
        *s = s.max(v.abs());
    }
    sup_norm = sup_norm.max(euclid(&x));

    let n = steps + 1;
    let mut times = Vec::with_capacity(n);
    let mut xs = Vec::with_capacity(n);
    let (mut a_ch, mut h_ch, mut m_ch) = (Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n));
    let u0 = u.value(0.0, &x);
    times.push(0.0);
    xs.push(u0);
    a_ch.push(0.0);
    m_ch.push(0.0);
    h_ch.push(u0.max(0.0));
    let mut sup_u = u0;

    let (mut f, mut g, mut dw) = (vec![0.0; d], vec![0.0; d * m], vec![0.0; m]);
    let (mut grad, mut hess) = (vec![0.0; d], vec![0.0; d * d]);
    let (mut b, mut drift_vec, mut hb, mut hf) = (vec![0.0; d], vec![0.0; d], vec![0.0; d], vec![0.0; d]);
    let mut x_new = vec![0.0; d];

    for i in 0..steps {
        let t = i as f64 * h;
        let view = PathView {
            t,
            x: &x,
            sup_norm,
            sup_abs: &sup_abs,
            history: &history,
            dt: h,
            initial: &spec.initial,
        };
        spec.drift(t, &view, &mut f);
        spec.diffusion(t, &view, &mut g);
        if f.iter().chain(&g).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite { t, state: x.clone() });
        }
        if let Some(obs) = observer.as_deref_mut() {
            obs(&StepInfo { view: &view, f: &f, g: &g, dt: h });
        }
        let rate = (dec.a_rate)(t, &view);
        noise(&mut dw);
        for j in 0..d {
            drift_vec[j] = f[j] * h;
            b[j] = (0..m).map(|k| g[j * m + k] * dw[k]).sum();
            x_new[j] = x[j] + drift_vec[j] + b[j];
        }
        if x_new.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite { t: t + h, state: x_new.clone() });
        }

        // Ito-Taylor split of U(x_new) - U(x) around the left point
        u.grad(t, &x, &mut grad);
        u.hess(t, &x, &mut hess);
        for j in 0..d {
            hf[j] = (0..d).map(|l| hess[j * d + l] * drift_vec[l]).sum();
            hb[j] = (0..d).map(|l| hess[j * d + l] * b[l]).sum();
        }
        let mut tr = 0.0;
        for k in 0..m {
            for j in 0..d {
                for l in 0..d {
                    tr += g[j * m + k] * hess[j * d + l] * g[l * m + k];
                }
            }
        }
        let dot = |a: &[f64], c: &[f64]| a.iter().zip(c).map(|(p, q)| p * q).sum::<f64>();
        let drift_part = dot(&grad, &drift_vec) + 0.5 * dot(&drift_vec, &hf) + 0.5 * tr * h + u.time_derivative(t, &x) * h;
        let mart_part = dot(&grad, &b) + dot(&hf, &b) + 0.5 * (dot(&b, &hb) - tr * h);

        let x_prev_u = *xs.last().unwrap();
        let u_new = u.value(t + h, &x_new);
        let resid = u_new - x_prev_u - drift_part - mart_part;
        let da = rate * h;
        let y = match dec.tag {
            AssumptionTag::Sup => sup_u,
            AssumptionTag::NoSup => x_prev_u,
        };
        let compensated = dec.eta.eval(y.max(dec.eta.c0())) * da;
        let dh = (drift_part + resid - compensated).max(0.0);

        x.copy_from_slice(&x_new);
        history.extend_from_slice(&x);
        for (s, v) in sup_abs.iter_mut().zip(&x) {
            *s = s.max(v.abs());
        }
        sup_norm = sup_norm.max(euclid(&x));
        sup_u = sup_u.max(u_new);

        times.push(t + h);
        xs.push(u_new);
        a_ch.push(a_ch[i] + da);
        m_ch.push(m_ch[i] + mart_part);
        h_ch.push(h_ch[i] + dh);
    }
    Ok(SimPath::new(times, xs, a_ch, h_ch, m_ch, dec.tag))
}

/// `dX = mu X dt + sigma X dW` in one dimension.
pub fn linear_sde(mu: f64, sigma: f64, x0: f64) -> Result<PathSdeSpec> {
    PathSdeSpec::new(
        1,
        Arc::new(move |_, v, out| out[0] = mu * v.x[0]),
        Arc::new(move |_, v, out| out[0] = sigma * v.x[0]),
        InitialSegment::Constant(vec![x0]),
    )
}

/// Scalar path-dependent example with `f = -x/2 - x^3 + sup_{s<=t} |x(s)|`
/// and `g = x^2 + (sup_{s<=t} |x(s)| ^ 1)`.
pub fn sup_feedback_sde(x0: f64) -> Result<PathSdeSpec> {
    PathSdeSpec::new(
        1,
        Arc::new(|_, v, out| {
            let x = v.x[0];
            out[0] = -0.5 * x - x * x * x + v.sup_norm;
        }),
        Arc::new(|_, v, out| {
            let x = v.x[0];
            out[0] = x * x + v.sup_norm.min(1.0);
        }),
        InitialSegment::Constant(vec![x0]),
    )
}

/// Scalar example with `<x, f> <= gamma1 sup |x|^2` and `|g|^2 <= gamma2`:
/// `f = gamma1 sup_{s<=t} |x(s)| tanh(x)`, `g = sqrt(gamma2) cos(sup_{s<=t} |x(s)|)`.
pub fn sup_growth_sde(gamma1: f64, gamma2: f64, x0: f64) -> Result<PathSdeSpec> {
    if !(gamma1 >= 0.0 && gamma2 >= 0.0) {
        return Err(Error::Invalid("growth constants must be nonnegative".into()));
    }
    let sg = gamma2.sqrt();
    PathSdeSpec::new(
        1,
        Arc::new(move |_, v, out| out[0] = gamma1 * v.sup_norm * v.x[0].tanh()),
        Arc::new(move |_, v, out| out[0] = sg * v.sup_norm.cos()),
        InitialSegment::Constant(vec![x0]),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngStream;

    #[test]
    fn degenerate_coefficients_freeze_the_state() {
        let spec = PathSdeSpec::new(
            2,
            Arc::new(|_, _, out| out.fill(0.0)),
            Arc::new(|_, _, out| out.fill(0.0)),
            InitialSegment::Constant(vec![1.5, -2.0]),
        )
        .unwrap();
        let path = euler_maruyama(&spec, 1.0, 0.01, RngStream::new(1, 0)).unwrap();
        assert!(path.x.iter().all(|&x| x == 1.5));
        assert!(path.h.iter().all(|&h| h == 1.5));
        path.validate().unwrap();
    }

    #[test]
    fn non_finite_coefficient_is_reported() {
        let spec = PathSdeSpec::new(
            1,
            Arc::new(|t, _, out| out[0] = if t > 0.5 { f64::NAN } else { 1.0 }),
            Arc::new(|_, _, out| out[0] = 0.0),
            InitialSegment::Constant(vec![0.0]),
        )
        .unwrap();
        match euler_maruyama(&spec, 1.0, 0.1, RngStream::new(1, 0)) {
            Err(Error::NonFinite { t, state }) => {
                assert!(t > 0.5 && t < 0.7, "{t}");
                assert_eq!(state.len(), 1);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rejects_bad_grid() {
        let spec = linear_sde(1.0, 0.5, 1.0).unwrap();
        assert!(euler_maruyama(&spec, 0.0, 0.1, RngStream::new(1, 0)).is_err());
        assert!(euler_maruyama(&spec, 1.0, -0.1, RngStream::new(1, 0)).is_err());
    }

    #[test]
    fn linear_channels_satisfy_the_assumption() {
        let spec = linear_sde(1.0, 0.5, 1.0).unwrap();
        for s in 0..200 {
            let path = euler_maruyama(&spec, 1.0, 0.01, RngStream::new(2, s)).unwrap();
            path.validate().unwrap();
            let res = path.assumption_residual(&EtaSpec::linear());
            assert!(res <= 1e-12 * path.x_sup_end(), "{res}");
            // U = x is linear, so the drift is compensated exactly and H stays at x0
            assert!((path.h_end() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn memory_lookup_reads_history() {
        let lag = 0.5;
        let spec = PathSdeSpec::new(
            1,
            Arc::new(move |t, v, out| {
                let mut past = [0.0];
                v.at(t - lag, &mut past);
                out[0] = past[0];
            }),
            Arc::new(|_, _, out| out[0] = 0.0),
            InitialSegment::Function { lag, z: Arc::new(|_, out| out[0] = 1.0), dim: 1 },
        )
        .unwrap();
        // x' = x(t - 1/2) with x = 1 on [-1/2, 0]: x(t) = 1 + t on [0, 1/2]
        let path = euler_maruyama(&spec, 1.0, 1e-3, RngStream::new(1, 0)).unwrap();
        let i = path.index_at(0.5);
        assert!((path.x[i] - 1.5).abs() < 2e-3, "{}", path.x[i]);
        // and 1.5 + (t - 1/2) + (t - 1/2)^2 / 2 on [1/2, 1]
        assert!((path.x_end() - 2.125).abs() < 5e-3, "{}", path.x_end());
    }

    #[test]
    fn sup_norm_covers_initial_segment() {
        let seen = std::sync::Mutex::new(0.0f64);
        let spec = PathSdeSpec::new(
            1,
            Arc::new(|_, _, out| out[0] = 0.0),
            Arc::new(|_, _, out| out[0] = 0.0),
            InitialSegment::Function { lag: 1.0, z: Arc::new(|s, out| out[0] = -3.0 * s), dim: 1 },
        )
        .unwrap();
        let mut obs = |info: &StepInfo| {
            *seen.lock().unwrap() = info.view.sup_norm;
        };
        let mut rng = RngStream::new(1, 0).rng();
        euler_maruyama_with(&spec, 0.1, 0.01, &mut rng, Some(&mut obs)).unwrap();
        assert_eq!(*seen.lock().unwrap(), 3.0);
    }

    #[test]
    fn sup_feedback_example_runs_and_dominates() {
        let spec = sup_feedback_sde(0.5).unwrap();
        let mut finite = 0;
        for s in 0..100 {
            match euler_maruyama(&spec, 1.0, 1e-3, RngStream::new(3, s)) {
                Ok(path) => {
                    path.validate().unwrap();
                    assert!(path.x.iter().all(|x| x.is_finite()));
                    assert!(path.assumption_residual(&EtaSpec::linear()) <= 1e-9 * path.x_sup_end().abs().max(1.0));
                    finite += 1;
                }
                Err(e) => panic!("{e}"),
            }
        }
        assert_eq!(finite, 100);
    }

    #[test]
    fn squared_norm_derivatives() {
        let u = ScalarField::squared_norm(2, 3.0);
        let x = [1.0, -2.0];
        assert_eq!(u.value(0.0, &x), 15.0);
        let mut g = [0.0; 2];
        u.grad(0.0, &x, &mut g);
        assert_eq!(g, [6.0, -12.0]);
        let mut h = [0.0; 4];
        u.hess(0.0, &x, &mut h);
        assert_eq!(h, [6.0, 0.0, 0.0, 6.0]);
        assert_eq!(u.time_derivative(0.0, &x), 0.0);
    }

    #[test]
    fn quadratic_observable_ito_split() {
        // U = x^2 for GBM: drift of U is (2 mu + sigma^2) U, so with
        // eta = x and dA = (2 mu + sigma^2) dt, H only picks up discretization error
        let (mu, sigma) = (0.3, 0.4);
        let spec = linear_sde(mu, sigma, 1.0)
            .unwrap()
            .with_decomposition(
                Decomposition::new(ScalarField::squared_norm(1, 1.0), EtaSpec::linear(), AssumptionTag::NoSup)
                    .with_constant_rate(2.0 * mu + sigma * sigma),
            )
            .unwrap();
        let mut hs = vec![];
        for s in 0..200 {
            let path = euler_maruyama(&spec, 1.0, 1e-3, RngStream::new(4, s)).unwrap();
            assert!(path.assumption_residual(&EtaSpec::linear()) <= 1e-9 * path.x_sup_end());
            hs.push(path.h_end() - 1.0);
        }
        let mean = hs.iter().sum::<f64>() / hs.len() as f64;
        assert!(mean < 0.05, "{mean}");
    }
}
