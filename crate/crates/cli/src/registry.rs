//! The experiment registry: names, anchors and accepted parameters.

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(untagged)]
pub enum ParamDefault {
    Real(f64),
    Int(u64),
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ParamSpec {
    pub key: &'static str,
    pub default: ParamDefault,
}

const fn real(key: &'static str, v: f64) -> ParamSpec {
    ParamSpec { key, default: ParamDefault::Real(v) }
}

const fn int(key: &'static str, v: u64) -> ParamSpec {
    ParamSpec { key, default: ParamDefault::Int(v) }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ExperimentInfo {
    pub name: &'static str,
    pub paper_ref: &'static str,
    pub summary: &'static str,
    pub default_n: usize,
    pub params: &'static [ParamSpec],
}

impl ExperimentInfo {
    pub fn param(&self, key: &str) -> Option<&ParamSpec> {
        self.params.iter().find(|p| p.key == key)
    }
}

/// e^10
const E10: f64 = 22026.465794806718;

pub const REGISTRY: [ExperimentInfo; 16] = [
    ExperimentInfo {
        name: "constants",
        paper_ref: "sharp constants beta, alpha1, alpha2",
        summary: "beta = 1/(1-p), alpha1 = (1-p)^(-1/p), alpha2 = 1/p",
        default_n: 0,
        params: &[real("p", 0.5)],
    },
    ExperimentInfo {
        name: "transforms",
        paper_ref: "Bihari-LaSalle transform G and its p-variant",
        summary: "G roundtrip, G~_p identity and reference-point invariance over the rate-function catalog",
        default_n: 0,
        params: &[real("p", 0.5)],
    },
    ExperimentInfo {
        name: "det-bihari",
        paper_ref: "deterministic Bihari-LaSalle inequality",
        summary: "G^-1(G(H) + A_t) against an RK4 solution for eta = x^2 and eta = x",
        default_n: 0,
        params: &[real("h", 1.0), real("t", 0.9), real("dt", 1e-4)],
    },
    ExperimentInfo {
        name: "sharpness-blocks",
        paper_ref: "block construction lemma, moment formula",
        summary: "E[(X*)^p] of the exact block construction against (1-p)^-1 (1 + p beta gamma)^k",
        default_n: 100_000,
        params: &[real("p", 0.5), real("eps", 0.5), real("delta", 0.5), int("k", 4)],
    },
    ExperimentInfo {
        name: "sharpness-beta",
        paper_ref: "sharpness of the constant beta",
        summary: "rate(delta) = ln(1 + p beta (1-eps) delta)/(p delta) approaching beta, with a Monte Carlo slope fit",
        default_n: 100_000,
        params: &[real("p", 0.5), real("eps", 0.01), real("delta", 0.5), int("kmax", 8)],
    },
    ExperimentInfo {
        name: "sharpness-alpha",
        paper_ref: "sharpness of alpha1 and alpha1 alpha2",
        summary: "E[S0^p] = 1/(1-p) for the Pareto start and the single-jump quasinorm ratio near alpha1 alpha2",
        default_n: 1_000_000,
        params: &[real("p", 0.5), int("n-jump", 200)],
    },
    ExperimentInfo {
        name: "weak-l1",
        paper_ref: "no tail estimate without A_nosup",
        summary: "u P[S_k > u] for the block construction over four decades of u",
        default_n: 1_000_000,
        params: &[real("eps", 0.5), real("delta", 0.5), int("k", 8)],
    },
    ExperimentInfo {
        name: "gronwall-nosup",
        paper_ref: "sharp stochastic Gronwall inequality under A_nosup",
        summary: "||e^-A_T X*_T||_p against each right-hand side for geometric Brownian motion, plus the mixed-norm form",
        default_n: 10_000,
        params: &[
            real("p", 0.5),
            real("q", 0.25),
            real("mu", 0.5),
            real("sigma", 0.4),
            real("x0", 1.0),
            real("t", 1.0),
            int("steps", 200),
        ],
    },
    ExperimentInfo {
        name: "gronwall-sup",
        paper_ref: "sharp stochastic Gronwall inequality under A_sup",
        summary: "||e^-beta A_T X*_T||_p on block-construction paths against its closed form and each right-hand side",
        default_n: 100_000,
        params: &[real("p", 0.5), real("q", 0.25), real("eps", 0.5), real("delta", 0.5), int("k", 4)],
    },
    ExperimentInfo {
        name: "bihari-convex",
        paper_ref: "sharp stochastic Bihari-LaSalle inequality for convex eta",
        summary: "both convex Bihari-LaSalle bounds on X = exp(gamma (x0 + W)^2)",
        default_n: 100_000,
        params: &[real("p", 0.3), real("gamma", 0.5), real("x0", 0.1), real("t", 0.5), real("dt", 1e-3)],
    },
    ExperimentInfo {
        name: "tail-bound",
        paper_ref: "tail estimate under A_nosup",
        summary: "P[sup X > u] against E[H ^ w]/G^-1(G(u) - R) + P[H >= w] + P[A > R]",
        default_n: 100_000,
        params: &[
            real("gamma", 0.5),
            real("x0", 0.1),
            real("t", 0.5),
            real("dt", 1e-3),
            real("u", E10),
            real("w", 10.0),
            real("r", 0.5),
        ],
    },
    ExperimentInfo {
        name: "lenglart",
        paper_ref: "Lenglart domination and its maximal inequality",
        summary: "E[X_tau] <= E[H_tau] over deterministic and first-passage times, the tail lemma and the alpha1 alpha2 bound",
        default_n: 10_000,
        params: &[real("p", 0.5), real("lambda", 0.5), real("sigma", 0.6), real("x0", 1.0), real("t", 1.0), int("steps", 100)],
    },
    ExperimentInfo {
        name: "exp-clock",
        paper_ref: "counterexample: the integrator must be predictable",
        summary: "E[X_t^p] = t + 1 while E[e^A_t] stays below e^(1/p)",
        default_n: 100_000,
        params: &[real("p", 0.5), real("t", 3.0)],
    },
    ExperimentInfo {
        name: "convex-counterexample",
        paper_ref: "counterexample: p-th moments explode for convex eta",
        summary: "E[X_T^p] of X = exp(gamma (x0 + W)^2) against its Gaussian integral",
        default_n: 100_000,
        params: &[real("p", 0.3), real("gamma", 0.5), real("x0", 0.1), real("t", 0.5), real("dt", 1e-3)],
    },
    ExperimentInfo {
        name: "exp-moments",
        paper_ref: "exponential moments of path-dependent SDEs",
        summary: "the exponential-moment bound for U = R|x|^2 with a sampled audit of the coefficient condition",
        default_n: 10_000,
        params: &[
            real("p", 0.3),
            real("gamma1", 0.5),
            real("gamma2", 0.5),
            real("r", 1.0),
            real("x0", 1.0),
            real("t", 1.0),
            real("dt", 1e-3),
        ],
    },
    ExperimentInfo {
        name: "sqrt-shift-tail",
        paper_ref: "no tail estimate without A_nosup, square-root shift",
        summary: "u P[sup Y^2 > u] for Y = sqrt(X + 1) over the block construction",
        default_n: 1_000_000,
        params: &[real("p", 0.5), real("eps", 0.5), real("delta", 0.5), int("k", 8)],
    },
];

pub fn lookup(name: &str) -> Option<&'static ExperimentInfo> {
    REGISTRY.iter().find(|e| e.name == name)
}
