use serde::{Deserialize, Serialize};

use super::bounds::{
    coherence_tail_bound, nonuniform_measurement_bound, uniform_measurement_bounds, ArrayCase, Constants,
    NonUniformBound, UniformBounds, CONSTANTS,
};
use super::coherence::{check_grid_conditions, ConditionMode, GridConditionReport};
use super::empirical::{coherence_tail_monte_carlo, empirical_gram, EmpiricalGram, TailMonteCarlo, TailSetup};
use crate::error::Result;
use crate::scene::{ParamGrids, RadarConfig};

/// Parameters of a guarantee evaluation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReportRequest {
    pub targets_per_bin: usize,
    pub theta: f64,
    pub eps1: f64,
    pub eps2: f64,
    pub eps: f64,
    pub case: ArrayCase,
    /// Draws for the isotropy average; 0 skips it.
    pub gram_draws: usize,
    /// Draws for the coherence tail; 0 skips it.
    pub tail_draws: usize,
    pub seed: u64,
}

impl Default for ReportRequest {
    fn default() -> Self {
        ReportRequest {
            targets_per_bin: 1,
            theta: 0.5,
            eps1: 0.05,
            eps2: 0.05,
            eps: 0.1,
            case: ArrayCase::Independent,
            gram_draws: 10_000,
            tail_draws: 10_000,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportInputs {
    pub request: ReportRequest,
    pub p: usize,
    pub p_max: usize,
    pub tx_count: usize,
    pub rx_count: usize,
    pub g_d: usize,
    pub g_theta: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportBounds {
    pub constants: Constants,
    pub coherence_tail: f64,
    pub uniform: UniformBounds,
    pub nonuniform: NonUniformBound,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportEmpirical {
    pub grid_uniform: GridConditionReport,
    pub grid_nonuniform: GridConditionReport,
    pub gram: Option<EmpiricalGram>,
    pub tail: Option<TailMonteCarlo>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportFlags {
    pub coherence_conditions_hold: bool,
    pub isotropy_conditions_hold: bool,
    pub isotropy_within_0_05: Option<bool>,
    pub gram_is_toeplitz: Option<bool>,
    pub tail_within_bound: Option<bool>,
    pub measurements_meet_uniform_bound: bool,
    pub measurements_meet_nonuniform_bound: bool,
}

/// JSON-serialisable `{inputs, bounds, empirical, flags}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GuaranteeReport {
    pub inputs: ReportInputs,
    pub bounds: ReportBounds,
    pub empirical: ReportEmpirical,
    pub flags: ReportFlags,
}

pub fn guarantee_report(config: &RadarConfig, grids: &ParamGrids, req: &ReportRequest) -> Result<GuaranteeReport> {
    let (g_d, g_theta) = (grids.doppler_grid_mps.len(), grids.angle_grid_rad.len());
    let (p, nt, nr) = (config.chirps_transmitted, config.tx_count, config.rx_count);
    let uniform = uniform_measurement_bounds(req.targets_per_bin, g_d, g_theta, req.eps1, req.eps2, req.case)?;
    let nonuniform = nonuniform_measurement_bound(req.targets_per_bin, g_d, g_theta, req.eps, p, nt, nr)?;
    let bounds = ReportBounds {
        constants: CONSTANTS,
        coherence_tail: coherence_tail_bound(req.theta, p, nt, nr, g_d, g_theta, req.case)?,
        uniform,
        nonuniform,
    };
    let grid_uniform = check_grid_conditions(grids, config, ConditionMode::Uniform)?;
    let grid_nonuniform = check_grid_conditions(grids, config, ConditionMode::Nonuniform)?;
    let gram = if req.gram_draws > 0 {
        Some(empirical_gram(config, grids, req.case, req.gram_draws, 100, req.seed)?)
    } else {
        None
    };
    let tail = if req.tail_draws > 0 && g_d >= 2 {
        Some(coherence_tail_monte_carlo(
            config,
            grids,
            &TailSetup {
                case: req.case,
                with_replacement: false,
                draws: req.tail_draws,
                thetas: vec![req.theta],
                seed: req.seed,
            },
        )?)
    } else {
        None
    };
    let elements_ok = match req.case {
        ArrayCase::Independent => uniform.ntnr_min.is_some_and(|m| (nt * nr) as u64 >= m),
        ArrayCase::Transceiver => uniform.nt_min.is_some_and(|m| nt as u64 >= m),
    };
    let flags = ReportFlags {
        coherence_conditions_hold: grid_uniform.pass,
        isotropy_conditions_hold: grid_nonuniform.pass,
        isotropy_within_0_05: gram.as_ref().map(|g| g.max_deviation < 0.05),
        gram_is_toeplitz: gram.as_ref().map(|g| {
            g.max_toeplitz_deviation_b < 1e-10 * p as f64 && g.max_toeplitz_deviation_c < 1e-10 * (nt * nr) as f64
        }),
        tail_within_bound: tail
            .as_ref()
            .map(|t| t.estimates.iter().all(|e| e.mu <= e.mu_bound + 3.0 * e.mu_se)),
        measurements_meet_uniform_bound: p as u64 >= uniform.p_min && elements_ok,
        measurements_meet_nonuniform_bound: (p * nt * nr) as f64 >= nonuniform.pntnr_min,
    };
    Ok(GuaranteeReport {
        inputs: ReportInputs {
            request: req.clone(),
            p,
            p_max: config.chirps_per_cpi_max,
            tx_count: nt,
            rx_count: nr,
            g_d,
            g_theta,
        },
        bounds,
        empirical: ReportEmpirical {
            grid_uniform,
            grid_nonuniform,
            gram,
            tail,
        },
        flags,
    })
}
