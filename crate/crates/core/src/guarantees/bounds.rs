//! Closed-form coherence tail and measurement-count bounds.

use serde::{Deserialize, Serialize};

use super::bessel::bessel_k1;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ArrayCase {
    /// Transmitter and receiver positions drawn independently.
    Independent,
    /// Co-located transceivers, `α = β`.
    Transceiver,
}

/// Bound constants. `kappa4` has no closed form and is left unspecified.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Constants {
    pub kappa1: f64,
    pub kappa2: f64,
    pub kappa3: f64,
    pub kappa4: Option<f64>,
    pub kappa5: f64,
    pub kappa6: f64,
    pub kappa7: f64,
}

pub const CONSTANTS: Constants = Constants {
    kappa1: 18.69,
    kappa2: 4.67,
    kappa3: 4.32,
    kappa4: None,
    kappa5: 2.87e6,
    kappa6: 6.0,
    kappa7: 23.513,
};

/// Upper bound on `P(μ > θ)` for `D = B ⊗ C`.
///
/// Independent: `1 − (1 − e^{−θ²P})^{G_D−1} (1 − q K₁(q))^{G_θ−1}`, `q = 2θ√(N_T N_R)`.
/// Transceiver: `1 − (1 − e^{−θ²P})^{G_D−1} (1 − e^{−N_T θ})^{G_θ−1}`.
pub fn coherence_tail_bound(
    theta: f64,
    p: usize,
    n_t: usize,
    n_r: usize,
    g_d: usize,
    g_theta: usize,
    case: ArrayCase,
) -> Result<f64> {
    if !(theta > 0.0 && theta < 1.0) {
        return Err(Error::invalid("theta", format!("must lie in (0, 1), got {theta}")));
    }
    let doppler = 1.0 - (-theta * theta * p as f64).exp();
    let angle = match case {
        ArrayCase::Independent => {
            let q = 2.0 * theta * ((n_t * n_r) as f64).sqrt();
            1.0 - q * bessel_k1(q)
        }
        ArrayCase::Transceiver => 1.0 - (-(n_t as f64) * theta).exp(),
    };
    let keep = doppler.powi(g_d.saturating_sub(1) as i32) * angle.powi(g_theta.saturating_sub(1) as i32);
    Ok((1.0 - keep).clamp(0.0, 1.0))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct UniformBounds {
    pub case: ArrayCase,
    pub p_min: u64,
    /// `N_T N_R` lower bound (independent case).
    pub ntnr_min: Option<u64>,
    /// `N_T` lower bound (transceiver case).
    pub nt_min: Option<u64>,
    /// Unrounded values, in the same order.
    pub p_min_exact: f64,
    pub element_min_exact: f64,
}

fn ceil_count(x: f64) -> u64 {
    // Guard against values a hair above an integer from rounding.
    let r = x.round();
    if (x - r).abs() < 1e-9 * x.abs().max(1.0) {
        r.max(0.0) as u64
    } else {
        x.ceil().max(0.0) as u64
    }
}

/// Measurement counts for uniform recovery of every `K`-sparse scene.
///
/// `P ≥ κ₁(K−½)² ln(G_D/ε₁)`; independent `N_TN_R ≥ κ₂(K−½)²(L + ½ln(2L))²` with
/// `L = ln(G_θ√π/(2ε₂))`; transceiver `N_T ≥ κ₃(K−½) ln(G_θ/ε₂)`.
pub fn uniform_measurement_bounds(
    k: usize,
    g_d: usize,
    g_theta: usize,
    eps1: f64,
    eps2: f64,
    case: ArrayCase,
) -> Result<UniformBounds> {
    if k < 1 {
        return Err(Error::invalid("K", "must be >= 1"));
    }
    if !(eps1 > 0.0 && eps2 > 0.0 && eps1 + eps2 < 1.0) {
        return Err(Error::invalid("eps", "need ε₁, ε₂ > 0 and ε₁ + ε₂ < 1"));
    }
    let s = k as f64 - 0.5;
    let c = CONSTANTS;
    let p = c.kappa1 * s * s * (g_d as f64 / eps1).ln();
    let (elem, ntnr_min, nt_min) = match case {
        ArrayCase::Independent => {
            let l = (g_theta as f64 * std::f64::consts::PI.sqrt() / (2.0 * eps2)).ln();
            let inner = l + 0.5 * (2.0 * l).ln();
            let v = c.kappa2 * s * s * inner * inner;
            (v, Some(ceil_count(v)), None)
        }
        ArrayCase::Transceiver => {
            let v = c.kappa3 * s * (g_theta as f64 / eps2).ln();
            (v, None, Some(ceil_count(v)))
        }
    };
    Ok(UniformBounds {
        case,
        p_min: ceil_count(p),
        ntnr_min,
        nt_min,
        p_min_exact: p,
        element_min_exact: elem,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NonUniformBound {
    /// `κ₅ K ln²(κ₆ G_D G_θ / ε)`.
    pub pntnr_min: f64,
    /// `κ₇ √(K / (P N_T N_R))`; multiply by σ for the error bound.
    pub error_factor: f64,
}

/// Measurement count for recovering one fixed `K`-sparse scene, plus the noise
/// amplification factor of the given `(P, N_T, N_R)`.
pub fn nonuniform_measurement_bound(
    k: usize,
    g_d: usize,
    g_theta: usize,
    eps: f64,
    p: usize,
    n_t: usize,
    n_r: usize,
) -> Result<NonUniformBound> {
    if k < 1 {
        return Err(Error::invalid("K", "must be >= 1"));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::invalid("eps", format!("must lie in (0, 1), got {eps}")));
    }
    let m = p * n_t * n_r;
    if m == 0 {
        return Err(Error::invalid("measurements", "P·N_T·N_R must be positive"));
    }
    let c = CONSTANTS;
    let l = (c.kappa6 * (g_d * g_theta) as f64 / eps).ln();
    Ok(NonUniformBound {
        pntnr_min: c.kappa5 * k as f64 * l * l,
        error_factor: c.kappa7 * (k as f64 / m as f64).sqrt(),
    })
}
