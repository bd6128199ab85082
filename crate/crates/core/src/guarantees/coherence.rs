use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::charfn::{char_fn_discrete_uniform, char_fn_uniform_width};
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::scene::{ParamGrids, RadarConfig};

/// Gram matrices of the two dictionary factors and the coherence of `B ⊗ C`.
#[derive(Clone, Debug, PartialEq)]
pub struct GramSummary {
    pub q_b: CMatrix,
    pub q_c: CMatrix,
    pub mu: f64,
    pub mu_b: f64,
    pub mu_c: f64,
    pub toeplitz_deviation_b: f64,
    pub toeplitz_deviation_c: f64,
}

fn normalized_offdiag_max(q: &CMatrix) -> f64 {
    let n = q.rows();
    let mut m = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let d = (q.get(i, i).re * q.get(j, j).re).sqrt();
                m = m.max(q.get(i, j).norm() / d);
            }
        }
    }
    m
}

/// Largest normalised inner product between distinct columns.
pub fn mutual_coherence(d: &CMatrix) -> f64 {
    normalized_offdiag_max(&d.gram())
}

/// Largest `|Q[i, j] − Q[i+1, j+1]|` over the matrix, zero for a Toeplitz matrix.
pub fn toeplitz_deviation(q: &CMatrix) -> f64 {
    let n = q.rows().min(q.cols());
    let mut m = 0.0f64;
    for i in 0..n.saturating_sub(1) {
        for j in 0..n.saturating_sub(1) {
            m = m.max((q.get(i, j) - q.get(i + 1, j + 1)).norm());
        }
    }
    m
}

/// Coherence of `B ⊗ C` from its factors. Two distinct Kronecker columns share
/// either the Doppler atom, the angle atom, or neither; the last case is a
/// product of two normalised moduli and never exceeds the others, so
/// `μ(B ⊗ C) = max(μ_B, μ_C)` (a factor with one column contributes nothing).
pub fn coherence(b: &CMatrix, c: &CMatrix) -> Result<GramSummary> {
    if b.cols() == 0 || c.cols() == 0 {
        return Err(Error::invalid("dictionary", "empty"));
    }
    let q_b = b.gram();
    let q_c = c.gram();
    let mu_b = normalized_offdiag_max(&q_b);
    let mu_c = normalized_offdiag_max(&q_c);
    Ok(GramSummary {
        mu: mu_b.max(mu_c),
        mu_b,
        mu_c,
        toeplitz_deviation_b: toeplitz_deviation(&q_b),
        toeplitz_deviation_c: toeplitz_deviation(&q_c),
        q_b,
        q_c,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConditionMode {
    /// Coherence conditions: Ψ vanishes at every lag `u` and at `2u`.
    Uniform,
    /// Isotropy conditions: Ψ_p(u^D) = 0 and Ψ_ξ(u^θ) = 0 with ξ = α + β.
    Nonuniform,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridConditionReport {
    pub pass: bool,
    pub worst_violation: f64,
    /// Description of the worst lag, e.g. `"doppler lag 16 at 2u"`.
    pub worst_location: String,
    pub tolerance: f64,
}

fn uniform_step(v: &[f64], what: &str) -> Result<f64> {
    if v.len() < 2 {
        return Ok(0.0);
    }
    let d0 = v[1] - v[0];
    let scale = v.iter().fold(0.0f64, |m, x| m.max(x.abs())).max(d0.abs());
    if v.windows(2).any(|w| ((w[1] - w[0]) - d0).abs() > 1e-9 * scale) {
        return Err(Error::invalid(what, "grid is not uniform"));
    }
    Ok(d0)
}

/// Evaluates Ψ at every grid lag from the first point and reports the worst modulus.
pub fn check_grid_conditions(
    grids: &ParamGrids,
    config: &RadarConfig,
    mode: ConditionMode,
) -> Result<GridConditionReport> {
    let tol = 1e-10;
    let lambda = config.wavelength_m();
    uniform_step(&grids.doppler_grid_mps, "doppler_grid_mps")?;
    let sins: Vec<f64> = grids.angle_grid_rad.iter().map(|a| a.sin()).collect();
    uniform_step(&sins, "angle_grid_rad (in sin)")?;
    let kd = 4.0 * PI * config.chirp_duration_s / lambda;
    let ka = PI * config.aperture_wavelengths();
    let w_t = config.tx_aperture_wavelengths / config.aperture_wavelengths();
    let w_r = config.rx_aperture_wavelengths / config.aperture_wavelengths();
    let p_max = config.chirps_per_cpi_max;

    let mut worst = 0.0f64;
    let mut loc = String::from("none");
    let mut note = |v: f64, what: String| {
        if v > worst {
            worst = v;
            loc = what;
        }
    };
    for i in 1..grids.doppler_grid_mps.len() {
        let u = kd * (grids.doppler_grid_mps[i] - grids.doppler_grid_mps[0]);
        note(
            char_fn_discrete_uniform(u, p_max).norm(),
            format!("doppler lag {i} at u"),
        );
        if mode == ConditionMode::Uniform {
            note(
                char_fn_discrete_uniform(2.0 * u, p_max).norm(),
                format!("doppler lag {i} at 2u"),
            );
        }
    }
    for j in 1..sins.len() {
        let u = ka * (sins[j] - sins[0]);
        match mode {
            ConditionMode::Uniform => {
                for (f, tag) in [(1.0, "u"), (2.0, "2u")] {
                    let v = char_fn_uniform_width(f * u, w_t)
                        .abs()
                        .max(char_fn_uniform_width(f * u, w_r).abs());
                    note(v, format!("angle lag {j} at {tag}"));
                }
            }
            ConditionMode::Nonuniform => {
                let v = (char_fn_uniform_width(u, w_t) * char_fn_uniform_width(u, w_r)).abs();
                note(v, format!("angle lag {j} at u"));
            }
        }
    }
    Ok(GridConditionReport {
        pass: worst < tol,
        worst_violation: worst,
        worst_location: loc,
        tolerance: tol,
    })
}
