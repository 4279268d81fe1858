//! Sharp constants and the bound transforms built from a rate function.

pub mod constants;
pub mod eta;
pub mod quadrature;
pub mod transform;

pub use constants::{sharp_constants, PExponent, SharpConstants, P_MAX};
pub use eta::{sampled_convex, EtaKind, EtaShape, EtaSpec, LogPrimitive, ScalarFn};
pub use transform::{
    damped_bound, eval_eta_p, eval_g, eval_g_inv, eval_tilde_g_p, BoundTransform, TransformMode,
};
