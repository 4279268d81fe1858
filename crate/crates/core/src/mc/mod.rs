//! Monte Carlo estimators and statistical checks of the inequalities.

pub mod battery;
pub mod beta;
pub mod checks;
pub mod estimate;
pub mod expmoment;
pub mod lenglart;
pub mod report;
pub mod tail;

pub use checks::{
    check_bihari_convex, check_gronwall_mixed, check_gronwall_nosup, check_gronwall_sup, check_tail_bound, BoundVariant,
};
pub use estimate::{
    estimate_mean_ln, estimate_moment, estimate_norm, estimate_norm_ln, estimate_quasinorm, estimate_quasinorm_ln,
    mean_estimate, median_of_means, pairwise_sum, EstimateMethod, MCEstimate,
};
pub use report::{overall, InequalityReport, Rhs, Verdict, VIOLATION_SE};
pub use tail::{strictly_increasing, tail_profile, TailPoint};
pub use beta::{beta_rate_scan, block_rate, fit_block_rate, BetaRate, RateFit};
pub use lenglart::{alpha_sharpness_ratio, check_lenglart_domination, lenglart_integrated_constant, AlphaRatio, LenglartConfig};
pub use expmoment::{check_exponential_moment, squared_norm_constants, AuditReport, AuditWorst, ExpMomentConfig, ExpMomentOutcome};
pub use battery::{battery_labels, run_battery, BatteryCase, BatteryKind, BatteryResult, CORRUPTION};
