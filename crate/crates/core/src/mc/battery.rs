//! Fixed generator batteries for the inequality checks: each configuration
//! satisfies the hypotheses of its inequality, and a copy with `H` scaled by
//! [`CORRUPTION`] must be flagged.

use serde::{Deserialize, Serialize};

use super::checks::{check_bihari_convex, check_gronwall_nosup, check_gronwall_sup, check_tail_bound, BoundVariant};
use super::lenglart::{check_lenglart_domination, LenglartConfig};
use super::report::{overall, InequalityReport, Verdict};
use crate::bounds::{BoundTransform, EtaSpec, PExponent};
use crate::error::Result;
use crate::rng::RngStream;
use crate::sim::em::{euler_maruyama, linear_sde};
use crate::sim::exact::{
    alpha_construction_path, gbm_path, poisson_path, sharpness_block_path, simulate_convex_counterexample, squared_bm_path, BlockParams,
};
use crate::sim::{par_samples, ScaledH, SimPath};

pub const CORRUPTION: f64 = 0.01;
pub const BATTERY_STEPS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BatteryKind {
    GronwallSup,
    GronwallNosup,
    BihariConvex,
    TailBound,
    Lenglart,
}

impl BatteryKind {
    pub const ALL: [BatteryKind; 5] = [
        BatteryKind::GronwallSup,
        BatteryKind::GronwallNosup,
        BatteryKind::BihariConvex,
        BatteryKind::TailBound,
        BatteryKind::Lenglart,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BatteryKind::GronwallSup => "gronwall-sup",
            BatteryKind::GronwallNosup => "gronwall-nosup",
            BatteryKind::BihariConvex => "bihari-convex",
            BatteryKind::TailBound => "tail-bound",
            BatteryKind::Lenglart => "lenglart",
        }
    }

    fn index(self) -> u64 {
        BatteryKind::ALL.iter().position(|k| *k == self).unwrap() as u64
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Generator {
    Blocks { epsilon: f64, delta: f64, k: u32 },
    Gbm { mu: f64, sigma: f64, x0: f64, t: f64 },
    SquaredBm { t: f64 },
    Poisson { lambda: f64, t: f64 },
    Alpha { p: f64, t: f64 },
    Convex { gamma: f64, x0: f64, t: f64 },
    EmLinear { mu: f64, sigma: f64, x0: f64, t: f64 },
}

impl Generator {
    fn label(&self) -> String {
        match *self {
            Generator::Blocks { epsilon, delta, k } => format!("blocks(eps={epsilon}, delta={delta}, k={k})"),
            Generator::Gbm { mu, sigma: 0.0, x0, t } => format!("deterministic(mu={mu}, x0={x0}, T={t})"),
            Generator::Gbm { mu, sigma, x0, t } => format!("gbm(mu={mu}, sigma={sigma}, x0={x0}, T={t})"),
            Generator::SquaredBm { t } => format!("squared-bm(T={t})"),
            Generator::Poisson { lambda, t } => format!("poisson(lambda={lambda}, T={t})"),
            Generator::Alpha { p, t } => format!("alpha-construction(p={p}, T={t})"),
            Generator::Convex { gamma, x0, t } => format!("convex-counterexample(gamma={gamma}, x0={x0}, T={t})"),
            Generator::EmLinear { mu, sigma, x0, t } => format!("euler-linear(mu={mu}, sigma={sigma}, x0={x0}, T={t})"),
        }
    }

    fn horizon(&self) -> f64 {
        match *self {
            Generator::Blocks { epsilon, delta, k } => BlockParams::new(epsilon, delta, k).map(|b| b.horizon()).unwrap_or(0.0),
            Generator::Gbm { t, .. }
            | Generator::SquaredBm { t }
            | Generator::Poisson { t, .. }
            | Generator::Alpha { t, .. }
            | Generator::Convex { t, .. }
            | Generator::EmLinear { t, .. } => t,
        }
    }

    fn paths(&self, n: usize, base: RngStream) -> Result<Vec<SimPath>> {
        let steps = BATTERY_STEPS;
        let g = *self;
        let one = move |s: RngStream| -> Result<SimPath> {
            let mut rng = s.rng();
            match g {
                Generator::Blocks { epsilon, delta, k } => Ok(sharpness_block_path(&BlockParams::new(epsilon, delta, k)?, &mut rng)),
                Generator::Gbm { mu, sigma, x0, t } => gbm_path(mu, sigma, x0, t, steps, &mut rng),
                Generator::SquaredBm { t } => squared_bm_path(t, steps, &mut rng),
                Generator::Poisson { lambda, t } => poisson_path(lambda, t, steps, &mut rng),
                Generator::Alpha { p, t } => alpha_construction_path(PExponent::new(p)?, t, steps, &mut rng),
                Generator::Convex { gamma, x0, t } => simulate_convex_counterexample(gamma, x0, t, t / steps as f64, &mut rng),
                Generator::EmLinear { mu, sigma, x0, t } => euler_maruyama(&linear_sde(mu, sigma, x0)?, t, t / steps as f64, s),
            }
        };
        par_samples(n, base, one).into_iter().collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Eta {
    Linear,
    SquaredGaussian(f64),
}

impl Eta {
    fn transform(self) -> Result<BoundTransform> {
        Ok(BoundTransform::with_default_reference(match self {
            Eta::Linear => EtaSpec::linear(),
            Eta::SquaredGaussian(g) => EtaSpec::squared_gaussian_exponent(g)?,
        }))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Check {
    GronwallSup { p: f64, variant: BoundVariant },
    GronwallNosup { p: f64, variant: BoundVariant },
    Bihari { eta: Eta, p: f64, with_sup: bool, variant: BoundVariant },
    /// `R` is the integrator bound as a multiple of the horizon.
    Tail { eta: Eta, u: f64, w: f64, r_per_t: f64 },
    Lenglart { p: f64 },
}

impl Check {
    fn label(&self) -> String {
        match *self {
            Check::GronwallSup { p, variant } | Check::GronwallNosup { p, variant } => format!("p={p}, {}", variant.name()),
            Check::Bihari { eta, p, with_sup, variant } => {
                format!("{eta:?}, p={p}, {}, {}", if with_sup { "sup" } else { "nosup" }, variant.name())
            }
            Check::Tail { eta, u, w, r_per_t } => format!("{eta:?}, u={u}, w={w}, R={r_per_t}T"),
            Check::Lenglart { p } => format!("p={p}"),
        }
    }

    fn run(&self, paths: &[SimPath], horizon: f64, h_factor: f64) -> Result<Vec<InequalityReport>> {
        let scaled = ScaledH { inner: paths, factor: h_factor };
        let pe = |p: f64| PExponent::new(p);
        Ok(match *self {
            Check::GronwallSup { p, variant } => vec![check_gronwall_sup(&scaled, pe(p)?, variant)?],
            Check::GronwallNosup { p, variant } => vec![check_gronwall_nosup(&scaled, pe(p)?, variant)?],
            Check::Bihari { eta, p, with_sup, variant } => {
                vec![check_bihari_convex(&scaled, &eta.transform()?, pe(p)?, with_sup, variant)?]
            }
            Check::Tail { eta, u, w, r_per_t } => {
                // a hair above the horizon so that A_T = R up to rounding counts as A_T <= R
                let r = r_per_t * horizon * (1.0 + 1e-9);
                vec![check_tail_bound(&scaled, &eta.transform()?, u, w, r)?]
            }
            Check::Lenglart { p } => check_lenglart_domination(&scaled, &LenglartConfig::new(pe(p)?))?,
        })
    }
}

fn cases(kind: BatteryKind) -> Vec<(Generator, Check)> {
    use BoundVariant::*;
    use Generator::*;
    let gbm = |mu, sigma, x0, t| Gbm { mu, sigma, x0, t };
    let em = |mu, sigma, x0, t| EmLinear { mu, sigma, x0, t };
    let convex = |gamma, x0, t| Convex { gamma, x0, t };
    match kind {
        BatteryKind::GronwallSup => {
            let c = |p, variant| Check::GronwallSup { p, variant };
            vec![
                (Blocks { epsilon: 0.5, delta: 0.5, k: 4 }, c(0.5, PredictableH)),
                (Blocks { epsilon: 0.5, delta: 0.5, k: 6 }, c(0.3, NonnegJumps)),
                (Blocks { epsilon: 0.2, delta: 0.25, k: 8 }, c(0.3, L1H)),
                (SquaredBm { t: 1.0 }, c(0.5, PredictableH)),
                (SquaredBm { t: 2.0 }, c(0.25, L1H)),
                (Poisson { lambda: 3.0, t: 2.0 }, c(0.5, NonnegJumps)),
                (Poisson { lambda: 10.0, t: 1.0 }, c(0.7, L1H)),
                (gbm(0.5, 0.4, 1.0, 1.0), c(0.5, PredictableH)),
                (Alpha { p: 0.5, t: 2.0 }, c(0.5, PredictableH)),
                (em(1.0, 0.5, 1.0, 1.0), c(0.4, NonnegJumps)),
            ]
        }
        BatteryKind::GronwallNosup => {
            let c = |p, variant| Check::GronwallNosup { p, variant };
            vec![
                (gbm(0.5, 0.4, 1.0, 1.0), c(0.5, PredictableH)),
                (gbm(1.0, 0.8, 1.0, 1.0), c(0.3, PredictableH)),
                (gbm(0.2, 0.2, 2.0, 2.0), c(0.7, NonnegJumps)),
                (gbm(0.0, 1.0, 1.0, 1.0), c(0.5, L1H)),
                (gbm(2.0, 0.5, 0.5, 0.5), c(0.2, L1H)),
                (gbm(0.5, 1.5, 1.0, 1.0), c(0.1, PredictableH)),
                (gbm(1.5, 0.0, 2.0, 1.0), c(0.5, L1H)),
                (em(1.0, 0.5, 1.0, 1.0), c(0.5, PredictableH)),
                (em(0.5, 0.3, 1.0, 2.0), c(0.3, L1H)),
                (em(0.8, 1.0, 1.0, 1.0), c(0.6, NonnegJumps)),
            ]
        }
        BatteryKind::BihariConvex => {
            let c = |eta, p, with_sup, variant| Check::Bihari { eta, p, with_sup, variant };
            let sg = Eta::SquaredGaussian;
            vec![
                (convex(0.5, 0.1, 0.5), c(sg(0.5), 0.3, false, PredictableH)),
                (convex(0.5, 0.5, 0.5), c(sg(0.5), 0.3, false, L1H)),
                (convex(0.25, 1.0, 1.0), c(sg(0.25), 0.2, false, PredictableH)),
                (convex(1.0, 0.2, 0.2), c(sg(1.0), 0.5, false, NonnegJumps)),
                (convex(0.5, 0.1, 0.5), c(sg(0.5), 0.3, true, PredictableH)),
                (convex(0.25, 0.5, 1.0), c(sg(0.25), 0.2, true, L1H)),
                (gbm(0.5, 0.4, 1.0, 1.0), c(Eta::Linear, 0.5, false, PredictableH)),
                (gbm(0.5, 0.4, 1.0, 1.0), c(Eta::Linear, 0.5, true, L1H)),
                (SquaredBm { t: 1.0 }, c(Eta::Linear, 0.5, true, PredictableH)),
                (Poisson { lambda: 3.0, t: 1.0 }, c(Eta::Linear, 0.4, true, NonnegJumps)),
            ]
        }
        BatteryKind::TailBound => {
            let c = |eta, u, w, r_per_t| Check::Tail { eta, u, w, r_per_t };
            let sg = Eta::SquaredGaussian;
            let lin = Eta::Linear;
            vec![
                (gbm(0.5, 0.4, 1.0, 1.0), c(lin, 2.0, 10.0, 0.5)),
                (gbm(0.0, 1.0, 1.0, 1.0), c(lin, 3.0, 5.0, 0.1)),
                (gbm(1.0, 0.8, 1.0, 1.0), c(lin, 5.0, 2.0, 1.0)),
                (gbm(1.0, 0.0, 1.0, 1.0), c(lin, 2.0, 10.0, 1.0)),
                (em(1.0, 0.5, 1.0, 1.0), c(lin, 2.0, 10.0, 1.0)),
                (em(0.5, 0.3, 1.0, 2.0), c(lin, 1.5, 3.0, 1.0)),
                (convex(0.5, 0.1, 0.5), c(sg(0.5), 1.5, 10.0, 1.0)),
                (convex(0.5, 0.5, 1.0), c(sg(0.5), std::f64::consts::E, 10.0, 1.0)),
                (convex(0.25, 1.0, 1.0), c(sg(0.25), 0.6f64.exp(), 10.0, 1.0)),
                (gbm(0.2, 0.5, 1.0, 2.0), c(lin, 3.0, 1.0, 0.2)),
            ]
        }
        BatteryKind::Lenglart => {
            let c = |p| Check::Lenglart { p };
            vec![
                (gbm(0.0, 0.6, 1.0, 1.0), c(0.5)),
                (gbm(0.0, 0.3, 2.0, 2.0), c(0.5)),
                (SquaredBm { t: 1.0 }, c(0.5)),
                (SquaredBm { t: 3.0 }, c(0.3)),
                (Poisson { lambda: 3.0, t: 1.0 }, c(0.5)),
                (Poisson { lambda: 10.0, t: 1.0 }, c(0.7)),
                (Poisson { lambda: 1.0, t: 5.0 }, c(0.5)),
                (Alpha { p: 0.5, t: 2.0 }, c(0.5)),
                (Alpha { p: 0.3, t: 2.0 }, c(0.3)),
                (em(0.0, 0.5, 1.0, 1.0), c(0.5)),
            ]
        }
    }
}

/// One configuration of a battery with its clean and corrupted reports.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BatteryCase {
    pub label: String,
    pub clean: Vec<InequalityReport>,
    pub corrupted: Vec<InequalityReport>,
}

impl BatteryCase {
    pub fn clean_verdict(&self) -> Verdict {
        overall(&self.clean)
    }

    pub fn corrupted_verdict(&self) -> Verdict {
        overall(&self.corrupted)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BatteryResult {
    pub kind: BatteryKind,
    pub n: usize,
    pub cases: Vec<BatteryCase>,
}

impl BatteryResult {
    /// Every clean configuration holds.
    pub fn sound(&self) -> bool {
        self.cases.iter().all(|c| c.clean_verdict() == Verdict::Holds)
    }

    /// Every corrupted configuration is violated.
    pub fn powerful(&self) -> bool {
        self.cases.iter().all(|c| c.corrupted_verdict() == Verdict::Violated)
    }
}

/// Labels of the configurations in a battery.
pub fn battery_labels(kind: BatteryKind) -> Vec<String> {
    cases(kind).iter().map(|(g, c)| format!("{} / {}", g.label(), c.label())).collect()
}

/// Runs all configurations of `kind` with `n` paths each. Configuration `j`
/// draws its paths from stream block `(kind, j)` of `seed`.
pub fn run_battery(kind: BatteryKind, n: usize, seed: u64) -> Result<BatteryResult> {
    let mut out = Vec::new();
    for (j, (gen, check)) in cases(kind).into_iter().enumerate() {
        let base = RngStream::new(seed, ((kind.index() << 8) | j as u64) << 40);
        let paths = gen.paths(n, base)?;
        let horizon = gen.horizon();
        out.push(BatteryCase {
            label: format!("{} / {}", gen.label(), check.label()),
            clean: check.run(&paths, horizon, 1.0)?,
            corrupted: check.run(&paths, horizon, CORRUPTION)?,
        });
    }
    Ok(BatteryResult { kind, n, cases: out })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ten_configurations_each() {
        for kind in BatteryKind::ALL {
            assert_eq!(battery_labels(kind).len(), 10, "{}", kind.name());
        }
    }

    #[test]
    fn small_batteries_hold_and_corruptions_are_caught() {
        for kind in BatteryKind::ALL {
            let res = run_battery(kind, 2000, 11).unwrap();
            for c in &res.cases {
                assert_eq!(c.clean_verdict(), Verdict::Holds, "{}: {:#?}", c.label, c.clean);
                assert_eq!(c.corrupted_verdict(), Verdict::Violated, "{}: {:#?}", c.label, c.corrupted);
            }
        }
    }
}
