use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Closed-form catalog entries, or a user-supplied rate function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EtaKind {
    /// `eta(x) = x` on `[0, inf)`
    Linear,
    /// `eta(x) = x ln x` on `[1, inf)`
    XLogX,
    /// `eta(x) = x ln x ln ln x` on `[e, inf)`
    XLogLogX,
    Numeric,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EtaShape {
    pub convex: bool,
    pub concave: bool,
    /// `eta(c0) = 0`
    pub zero_at_floor: bool,
}

/// An antiderivative `F` of `1/eta` written in the log variable, i.e.
/// `dF/dl = e^l / eta(e^l)`, together with its inverse.
///
/// `lower` and `upper` are the limits of `F` at `l = ln c0` and `l = inf`;
/// `inverse` is only called on values strictly inside that interval.
#[derive(Clone)]
pub struct LogPrimitive {
    pub forward: ScalarFn,
    pub inverse: ScalarFn,
    pub lower: f64,
    pub upper: f64,
}

/// A nondecreasing rate function `eta: [c0, inf) -> [0, inf)`.
#[derive(Clone)]
pub struct EtaSpec {
    label: String,
    c0: f64,
    kind: EtaKind,
    eta: ScalarFn,
    shape: EtaShape,
    primitive: Option<LogPrimitive>,
    default_reference: f64,
}

impl fmt::Debug for EtaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("EtaSpec")
            .field("label", &self.label)
            .field("c0", &self.c0)
            .field("kind", &self.kind)
            .field("shape", &self.shape)
            .field("log_primitive", &self.primitive.is_some())
            .finish()
    }
}

impl EtaSpec {
    pub fn linear() -> Self {
        Self {
            label: "x".into(),
            c0: 0.0,
            kind: EtaKind::Linear,
            eta: Arc::new(|x| x),
            shape: EtaShape {
                convex: true,
                concave: true,
                zero_at_floor: true,
            },
            primitive: None,
            default_reference: 1.0,
        }
    }

    pub fn x_log_x() -> Self {
        Self {
            label: "x ln x".into(),
            c0: 1.0,
            kind: EtaKind::XLogX,
            eta: Arc::new(|x: f64| x * x.ln()),
            shape: EtaShape {
                convex: true,
                concave: false,
                zero_at_floor: true,
            },
            primitive: None,
            default_reference: std::f64::consts::E,
        }
    }

    pub fn x_log_log_x() -> Self {
        Self {
            label: "x ln x ln ln x".into(),
            c0: std::f64::consts::E,
            kind: EtaKind::XLogLogX,
            eta: Arc::new(|x: f64| {
                let l = x.ln();
                x * l * l.ln()
            }),
            shape: EtaShape {
                convex: true,
                concave: false,
                zero_at_floor: true,
            },
            primitive: None,
            default_reference: std::f64::consts::E.exp(),
        }
    }

    /// The three closed-form catalog entries.
    pub fn catalog() -> Vec<Self> {
        vec![Self::linear(), Self::x_log_x(), Self::x_log_log_x()]
    }

    /// A numeric rate function; `G` is then evaluated by quadrature unless a
    /// log primitive is attached with [`EtaSpec::with_log_primitive`].
    pub fn numeric(
        label: impl Into<String>,
        c0: f64,
        eta: impl Fn(f64) -> f64 + Send + Sync + 'static,
        shape: EtaShape,
    ) -> Result<Self> {
        if !(c0 >= 0.0 && c0.is_finite()) {
            return Err(domain("c0", c0, "domain floor must be finite and nonnegative"));
        }
        Ok(Self {
            label: label.into(),
            c0,
            kind: EtaKind::Numeric,
            eta: Arc::new(eta),
            shape,
            primitive: None,
            default_reference: c0 + 1.0,
        })
    }

    /// `eta(x) = gamma x (1 + 2 ln x)` for `x >= 1`, extended by `gamma x` on
    /// `[0, 1]`; convex, nondecreasing, zero at 0. This is the drift rate of
    /// `exp(gamma (x0 + W_t)^2)`.
    pub fn squared_gaussian_exponent(gamma: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(domain("gamma", gamma, "must be positive"));
        }
        let spec = Self::numeric(
            format!("{gamma} x (1 + 2 ln x)"),
            0.0,
            move |x: f64| {
                if x <= 1.0 {
                    gamma * x
                } else {
                    gamma * x * (1.0 + 2.0 * x.ln())
                }
            },
            EtaShape {
                convex: true,
                concave: false,
                zero_at_floor: true,
            },
        )?
        .with_default_reference(1.0)?;
        Ok(spec.with_log_primitive(LogPrimitive {
            forward: Arc::new(move |l: f64| {
                if l < 0.0 {
                    l / gamma
                } else {
                    (2.0 * l).ln_1p() / (2.0 * gamma)
                }
            }),
            inverse: Arc::new(move |y: f64| {
                if y < 0.0 {
                    gamma * y
                } else {
                    0.5 * (2.0 * gamma * y).exp_m1()
                }
            }),
            lower: f64::NEG_INFINITY,
            upper: f64::INFINITY,
        }))
    }

    pub fn with_log_primitive(mut self, primitive: LogPrimitive) -> Self {
        self.primitive = Some(primitive);
        self
    }

    pub fn with_default_reference(mut self, c: f64) -> Result<Self> {
        if !(c > self.c0 && c.is_finite()) {
            return Err(domain("c", c, "reference point must exceed the domain floor"));
        }
        self.default_reference = c;
        Ok(self)
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        (self.eta)(x)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn c0(&self) -> f64 {
        self.c0
    }

    pub fn kind(&self) -> EtaKind {
        self.kind
    }

    pub fn shape(&self) -> EtaShape {
        self.shape
    }

    pub fn log_primitive(&self) -> Option<&LogPrimitive> {
        self.primitive.as_ref()
    }

    pub fn default_reference(&self) -> f64 {
        self.default_reference
    }

    /// Sampled check that `eta` is nondecreasing and positive above `c0` on
    /// a log-spaced grid of `n` points between `c0 + span*1e-6` and
    /// `c0 + span`.
    pub fn check_sampled(&self, span: f64, n: usize) -> Result<()> {
        let grid = log_grid(self.c0, span, n);
        let mut prev = f64::NEG_INFINITY;
        for &x in &grid {
            let v = self.eval(x);
            if !(v > 0.0) {
                return Err(Error::Invalid(format!(
                    "eta({x}) = {v} is not positive above c0 = {}",
                    self.c0
                )));
            }
            if v < prev {
                return Err(Error::Invalid(format!("eta decreases at x = {x}")));
            }
            prev = v;
        }
        Ok(())
    }
}

/// Sampled midpoint-convexity check of `f` on a log-spaced grid above `floor`.
pub fn sampled_convex(f: &dyn Fn(f64) -> f64, floor: f64, span: f64, n: usize) -> bool {
    let grid = log_grid(floor, span, n);
    grid.windows(2).all(|w| {
        let (a, b) = (w[0], w[1]);
        let m = 0.5 * (a + b);
        let (fa, fb, fm) = (f(a), f(b), f(m));
        fm <= 0.5 * (fa + fb) + 1e-9 * (1.0 + fa.abs().max(fb.abs()))
    })
}

fn log_grid(floor: f64, span: f64, n: usize) -> Vec<f64> {
    let n = n.max(2);
    let lo = (span * 1e-6).ln();
    let hi = span.ln();
    (0..n)
        .map(|i| floor + (lo + (hi - lo) * i as f64 / (n - 1) as f64).exp())
        .collect()
}
