//! Monte Carlo estimates of the Gram statistics over random arrays and schedules.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::bounds::{coherence_tail_bound, ArrayCase};
use super::coherence::toeplitz_deviation;
use crate::error::{Error, Result};
use crate::rng;
use crate::scene::{sample_chirp_schedule, sample_sla, sample_transceiver, ArrayGeometry, ParamGrids, RadarConfig};
use crate::solvers::{build_angle_dictionary, build_doppler_dictionary};

/// Lag phases `u` of the Doppler and angle grids relative to their first point.
fn lag_phases(grids: &ParamGrids, config: &RadarConfig) -> (Vec<f64>, Vec<f64>) {
    let kd = 4.0 * PI * config.chirp_duration_s / config.wavelength_m();
    let ka = PI * config.aperture_wavelengths();
    let d0 = grids.doppler_grid_mps[0];
    let s0 = grids.angle_grid_rad[0].sin();
    (
        grids.doppler_grid_mps.iter().map(|r| kd * (r - d0)).collect(),
        grids.angle_grid_rad.iter().map(|a| ka * (a.sin() - s0)).collect(),
    )
}

fn draw_geometry(config: &RadarConfig, case: ArrayCase, seed: u64) -> Result<ArrayGeometry> {
    match case {
        ArrayCase::Independent => Ok(sample_sla(config, seed)),
        ArrayCase::Transceiver => sample_transceiver(config, seed),
    }
}

/// `Σ_x e^{j u x}` for each lag phase `u`.
fn first_row(phases: &[f64], xs: &[f64]) -> Vec<Complex64> {
    phases
        .iter()
        .map(|&u| xs.iter().map(|&x| Complex64::from_polar(1.0, u * x)).sum())
        .collect()
}

/// Averages of `Q_D = (BᴴB) ⊗ (CᴴC)` over random draws.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalGram {
    pub draws: usize,
    /// `max |mean Q_D / (P N_T N_R) − I|` over all entries.
    pub max_deviation: f64,
    /// Largest Toeplitz deviation of `Q_B` and `Q_C` across the checked draws.
    pub max_toeplitz_deviation_b: f64,
    pub max_toeplitz_deviation_c: f64,
    pub toeplitz_draws_checked: usize,
}

/// Mean of `Q_D/(P N_T N_R)` over `n_draws` geometry and schedule realisations.
///
/// `Q_B` and `Q_C` are Toeplitz for uniform grids (checked exactly on the first
/// `toeplitz_checks` draws from the full Gram matrices), so every entry of
/// `Q_D` is a product `Γ_B(d)·Γ_C(a)` of first-row lags and the mean is
/// accumulated per lag pair.
pub fn empirical_gram(
    config: &RadarConfig,
    grids: &ParamGrids,
    case: ArrayCase,
    n_draws: usize,
    toeplitz_checks: usize,
    seed: u64,
) -> Result<EmpiricalGram> {
    if n_draws == 0 {
        return Err(Error::invalid("n_draws", "must be >= 1"));
    }
    let (ud, ua) = lag_phases(grids, config);
    let (gd, ga) = (ud.len(), ua.len());
    let norm = (config.chirps_transmitted * config.tx_count * config.rx_count) as f64;
    let per_draw = |d: usize| -> Result<(Vec<Complex64>, f64, f64)> {
        let s = rng::derive_seed(seed, "gram", d as u64);
        let geo = draw_geometry(config, case, s)?;
        let sch = sample_chirp_schedule(config.chirps_transmitted, config.chirps_per_cpi_max, s)?;
        let zeta: Vec<f64> = sch.indices.iter().map(|&z| z as f64).collect();
        let rb = first_row(&ud, &zeta);
        let rc = first_row(&ua, &geo.virtual_positions());
        // Products over signed lags: index (d + gd − 1, a + ga − 1).
        let lag = |row: &[Complex64], k: isize| {
            if k >= 0 {
                row[k as usize]
            } else {
                row[(-k) as usize].conj()
            }
        };
        let mut prod = Vec::with_capacity((2 * gd - 1) * (2 * ga - 1));
        for dl in -(gd as isize - 1)..=(gd as isize - 1) {
            let b = lag(&rb, dl);
            for al in -(ga as isize - 1)..=(ga as isize - 1) {
                prod.push(b * lag(&rc, al));
            }
        }
        let (mut tb, mut tc) = (0.0, 0.0);
        if d < toeplitz_checks {
            let bd = build_doppler_dictionary(&sch, &grids.doppler_grid_mps, config)?;
            let cd = build_angle_dictionary(&geo, &grids.angle_grid_rad, config)?;
            tb = toeplitz_deviation(&bd.matrix.gram());
            tc = toeplitz_deviation(&cd.matrix.gram());
        }
        Ok((prod, tb, tc))
    };
    let len = (2 * gd - 1) * (2 * ga - 1);
    // Fixed chunks summed in order keep the result independent of thread count.
    const CHUNK: usize = 1024;
    let chunks: Vec<(Vec<Complex64>, f64, f64)> = (0..n_draws.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| -> Result<_> {
            let mut acc = vec![Complex64::new(0.0, 0.0); len];
            let (mut tb, mut tc) = (0.0f64, 0.0f64);
            for d in c * CHUNK..((c + 1) * CHUNK).min(n_draws) {
                let (p, b, cc) = per_draw(d)?;
                acc.iter_mut().zip(&p).for_each(|(a, v)| *a += v);
                tb = tb.max(b);
                tc = tc.max(cc);
            }
            Ok((acc, tb, tc))
        })
        .collect::<Result<_>>()?;
    let mut sum = vec![Complex64::new(0.0, 0.0); len];
    let (mut tb, mut tc) = (0.0f64, 0.0f64);
    for (acc, b, c) in chunks {
        sum.iter_mut().zip(&acc).for_each(|(x, y)| *x += y);
        tb = tb.max(b);
        tc = tc.max(c);
    }
    let centre = (gd - 1) * (2 * ga - 1) + (ga - 1);
    let max_deviation = sum
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let m = v / (n_draws as f64 * norm);
            if i == centre {
                (m - 1.0).norm()
            } else {
                m.norm()
            }
        })
        .fold(0.0, f64::max);
    Ok(EmpiricalGram {
        draws: n_draws,
        max_deviation,
        max_toeplitz_deviation_b: tb,
        max_toeplitz_deviation_c: tc,
        toeplitz_draws_checked: toeplitz_checks.min(n_draws),
    })
}

/// Inputs of the coherence tail experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailSetup {
    pub case: ArrayCase,
    /// Draw chirp indices i.i.d. (with replacement) instead of distinct.
    pub with_replacement: bool,
    pub draws: usize,
    pub thetas: Vec<f64>,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailEstimate {
    pub theta: f64,
    /// Empirical `P(|Γ_B| > θ)` at the first Doppler lag.
    pub single_lag: f64,
    pub single_lag_se: f64,
    /// `e^{−θ²P}`.
    pub single_lag_bound: f64,
    /// Empirical `P(μ > θ)` over the whole grid.
    pub mu: f64,
    pub mu_se: f64,
    pub mu_bound: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailMonteCarlo {
    pub setup: TailSetup,
    pub estimates: Vec<TailEstimate>,
    /// Kolmogorov distance of the first-lag `|Γ_B|` sample to the Rayleigh law
    /// with `σ² = 1/(2P)`.
    pub rayleigh_ks_distance: f64,
    pub mean_mu: f64,
}

/// Empirical coherence tails over random arrays and schedules.
pub fn coherence_tail_monte_carlo(
    config: &RadarConfig,
    grids: &ParamGrids,
    setup: &TailSetup,
) -> Result<TailMonteCarlo> {
    if setup.draws == 0 {
        return Err(Error::invalid("draws", "must be >= 1"));
    }
    if grids.doppler_grid_mps.len() < 2 {
        return Err(Error::invalid("doppler_grid_mps", "needs at least two points"));
    }
    let (ud, ua) = lag_phases(grids, config);
    let p = config.chirps_transmitted;
    let p_max = config.chirps_per_cpi_max;
    let m = (config.tx_count * config.rx_count) as f64;
    let samples: Vec<(f64, f64)> = (0..setup.draws)
        .into_par_iter()
        .map(|d| -> Result<(f64, f64)> {
            let s = rng::derive_seed(setup.seed, "tail", d as u64);
            let geo = draw_geometry(config, setup.case, s)?;
            let zeta: Vec<f64> = if setup.with_replacement {
                let mut r = rng::stream(s, "chirps-iid", 0);
                (0..p).map(|_| r.random_range(0..p_max) as f64).collect()
            } else {
                sample_chirp_schedule(p, p_max, s)?
                    .indices
                    .iter()
                    .map(|&z| z as f64)
                    .collect()
            };
            let rb = first_row(&ud[1..], &zeta);
            let rc = first_row(&ua[1..], &geo.virtual_positions());
            let mu_b = rb.iter().map(|v| v.norm() / p as f64).fold(0.0, f64::max);
            let mu_c = rc.iter().map(|v| v.norm() / m).fold(0.0, f64::max);
            Ok((rb[0].norm() / p as f64, mu_b.max(mu_c)))
        })
        .collect::<Result<_>>()?;
    let n = setup.draws as f64;
    let estimates = setup
        .thetas
        .iter()
        .map(|&theta| -> Result<TailEstimate> {
            let single = samples.iter().filter(|s| s.0 > theta).count() as f64 / n;
            let mu = samples.iter().filter(|s| s.1 > theta).count() as f64 / n;
            Ok(TailEstimate {
                theta,
                single_lag: single,
                single_lag_se: (single * (1.0 - single) / n).sqrt(),
                single_lag_bound: (-theta * theta * p as f64).exp(),
                mu,
                mu_se: (mu * (1.0 - mu) / n).sqrt(),
                mu_bound: coherence_tail_bound(
                    theta,
                    p,
                    config.tx_count,
                    config.rx_count,
                    grids.doppler_grid_mps.len(),
                    grids.angle_grid_rad.len(),
                    setup.case,
                )?,
            })
        })
        .collect::<Result<_>>()?;
    let mut g: Vec<f64> = samples.iter().map(|s| s.0).collect();
    g.sort_by(f64::total_cmp);
    let ks = g
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = 1.0 - (-x * x * p as f64).exp();
            (f - i as f64 / n).abs().max((f - (i + 1) as f64 / n).abs())
        })
        .fold(0.0, f64::max);
    Ok(TailMonteCarlo {
        setup: setup.clone(),
        estimates,
        rayleigh_ks_distance: ks,
        mean_mu: samples.iter().map(|s| s.1).sum::<f64>() / n,
    })
}
