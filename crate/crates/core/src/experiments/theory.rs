//! Closed-form steady-state predictions for RGA with β = 2 under Gaussian noise.
//!
//! With η = μλ and φ_G → 1 in steady state,
//!
//! ```text
//! MSD(∞) = L η σ_v² / (2 − η tr(R_x)),    0 < η < 2 / tr(R_x)
//! ```

use serde::Serialize;

use crate::error::{ensure_finite, ensure_positive, Error, Result};
use crate::experiments::metrics::to_db;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TheoryPrediction {
    /// Steady-state MSD on a linear scale.
    pub msd: f64,
    pub msd_db: f64,
    /// Effective step μλ.
    pub eta: f64,
    /// Largest stable η, 2/(φ_G tr R_x) with φ_G = 1.
    pub eta_max: f64,
    /// Largest stable user step, η_max/λ.
    pub mu_max: f64,
}

/// Steady-state MSD and stability bound for filter length `l`.
pub fn predict_steady_state_msd(
    l: usize,
    mu: f64,
    lambda: f64,
    sigma_v2: f64,
    trace_rx: f64,
) -> Result<TheoryPrediction> {
    if l == 0 {
        return Err(Error::Argument("filter length must be at least 1".into()));
    }
    ensure_positive("mu", mu)?;
    ensure_positive("lambda", lambda)?;
    ensure_positive("trace_rx", trace_rx)?;
    ensure_finite("sigma_v2", sigma_v2)?;
    if sigma_v2 < 0.0 {
        return Err(Error::Argument(format!(
            "sigma_v2 must satisfy sigma_v2 >= 0, got {sigma_v2}"
        )));
    }
    let eta = mu * lambda;
    let eta_max = 2.0 / trace_rx;
    if eta >= eta_max {
        return Err(Error::OutOfRegime(format!(
            "eta * tr(R_x) = {} is not below 2",
            eta * trace_rx
        )));
    }
    let msd = l as f64 * eta * sigma_v2 / (2.0 - eta * trace_rx);
    Ok(TheoryPrediction {
        msd,
        msd_db: to_db(msd),
        eta,
        eta_max,
        mu_max: eta_max / lambda,
    })
}
