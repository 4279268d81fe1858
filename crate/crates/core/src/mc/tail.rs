use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// `u P[S > u]` at one level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailPoint {
    pub u: f64,
    pub value: f64,
    /// `u sqrt(P(1-P)/n)`
    pub std_error: f64,
}

/// The weak-L1 profile `u P^[S > u]` over an increasing grid of levels.
pub fn tail_profile(samples: &[f64], u_grid: &[f64]) -> Result<Vec<TailPoint>> {
    let n = samples.len();
    if n < 2 {
        return Err(Error::TooFewSamples { needed: 2, got: n });
    }
    if let Some(&u) = u_grid.iter().find(|u| !(**u > 0.0 && u.is_finite())) {
        return Err(domain("u", u, "levels must be positive"));
    }
    if u_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Invalid("levels must be strictly increasing".into()));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(u_grid
        .iter()
        .map(|&u| {
            let above = n - sorted.partition_point(|&s| s <= u);
            let prob = above as f64 / n as f64;
            TailPoint { u, value: u * prob, std_error: u * (prob * (1.0 - prob) / n as f64).sqrt() }
        })
        .collect())
}

/// Successive profile points increase by more than `k` combined standard errors.
pub fn strictly_increasing(profile: &[TailPoint], k: f64) -> bool {
    profile.windows(2).all(|w| {
        let se = (w[0].std_error.powi(2) + w[1].std_error.powi(2)).sqrt();
        w[1].value - w[0].value > k * se
    })
}
