use serde::{Deserialize, Serialize};

use super::method::MethodName;
use super::pipeline::Estimate;
use crate::scene::{ParamGrids, RadarConfig, TargetScene};

/// Hit windows: an estimate within all three of a target is a hit.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Resolutions {
    pub range_m: f64,
    pub velocity_mps: f64,
    pub aoa_rad: f64,
}

impl Resolutions {
    /// Range: the DFT bin width for every method. Velocity and angle: the
    /// physical resolution of the full array for the classical method, and the
    /// Doppler grid spacing and 2° for the sparse methods.
    pub fn for_method(method: MethodName, config: &RadarConfig, grids: &ParamGrids) -> Self {
        let range_m = config.range_resolution_m();
        if method == MethodName::ClassicalDft {
            return Resolutions {
                range_m,
                velocity_mps: config.velocity_resolution_mps(),
                aoa_rad: 7f64.to_radians(),
            };
        }
        let g = &grids.doppler_grid_mps;
        let velocity_mps = if g.len() > 1 {
            (g[g.len() - 1] - g[0]) / (g.len() - 1) as f64
        } else {
            config.velocity_resolution_mps()
        };
        Resolutions {
            range_m,
            velocity_mps,
            aoa_rad: 2f64.to_radians(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HitError {
    pub range_m: f64,
    pub velocity_mps: f64,
    pub aoa_rad: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TrialMetrics {
    pub targets: usize,
    pub hits: usize,
    pub false_alarms: usize,
    pub errors: Vec<HitError>,
    pub wall_time_s: f64,
}

/// One-to-one matching. Every (target, estimate) pair inside all windows is a
/// candidate; pairs are claimed in order of normalised distance, so each target
/// takes the nearest estimate not already claimed. Unclaimed estimates are
/// false alarms.
pub fn classify(estimates: &[Estimate], truth: &TargetScene, res: &Resolutions) -> TrialMetrics {
    let inside = |d: f64, w: f64| d.abs() <= w * (1.0 + 1e-12);
    let mut pairs = Vec::new();
    for (ti, t) in truth.targets.iter().enumerate() {
        for (ei, e) in estimates.iter().enumerate() {
            let dr = e.range_m - t.range_m;
            let dv = e.velocity_mps - t.velocity_mps;
            let da = e.aoa_rad - t.aoa_rad;
            if inside(dr, res.range_m) && inside(dv, res.velocity_mps) && inside(da, res.aoa_rad) {
                let d = (dr / res.range_m).powi(2) + (dv / res.velocity_mps).powi(2) + (da / res.aoa_rad).powi(2);
                pairs.push((
                    d,
                    ti,
                    ei,
                    HitError {
                        range_m: dr,
                        velocity_mps: dv,
                        aoa_rad: da,
                    },
                ));
            }
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    let mut t_used = vec![false; truth.targets.len()];
    let mut e_used = vec![false; estimates.len()];
    let mut errors = Vec::new();
    for (_, ti, ei, err) in pairs {
        if !t_used[ti] && !e_used[ei] {
            t_used[ti] = true;
            e_used[ei] = true;
            errors.push(err);
        }
    }
    TrialMetrics {
        targets: truth.targets.len(),
        hits: errors.len(),
        false_alarms: estimates.len() - errors.len(),
        errors,
        wall_time_s: 0.0,
    }
}

/// Rates and hit-only RMSEs over a set of trials.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AggregateReport {
    pub method: MethodName,
    pub snr_db: f64,
    pub sigma_theta: f64,
    pub sigma_r: f64,
    pub targets: usize,
    pub hits: usize,
    pub false_alarms: usize,
    /// Hits over targets present.
    pub hit_rate: f64,
    /// False alarms over all reported estimates.
    pub fa_rate: f64,
    pub rmse_range_m: f64,
    pub rmse_velocity_mps: f64,
    pub rmse_aoa_rad: f64,
    pub runs: usize,
    /// Mean estimation time per trial.
    pub wall_time_s: f64,
}

pub fn aggregate(
    trials: &[TrialMetrics],
    method: MethodName,
    snr_db: f64,
    sigma_theta: f64,
    sigma_r: f64,
) -> AggregateReport {
    let targets: usize = trials.iter().map(|t| t.targets).sum();
    let hits: usize = trials.iter().map(|t| t.hits).sum();
    let false_alarms: usize = trials.iter().map(|t| t.false_alarms).sum();
    let errs: Vec<&HitError> = trials.iter().flat_map(|t| &t.errors).collect();
    let rmse = |f: fn(&HitError) -> f64| {
        if errs.is_empty() {
            f64::NAN
        } else {
            (errs.iter().map(|e| f(e).powi(2)).sum::<f64>() / errs.len() as f64).sqrt()
        }
    };
    let ratio = |a: usize, b: usize| if b == 0 { 0.0 } else { a as f64 / b as f64 };
    AggregateReport {
        method,
        snr_db,
        sigma_theta,
        sigma_r,
        targets,
        hits,
        false_alarms,
        hit_rate: ratio(hits, targets),
        fa_rate: ratio(false_alarms, hits + false_alarms),
        rmse_range_m: rmse(|e| e.range_m),
        rmse_velocity_mps: rmse(|e| e.velocity_mps),
        rmse_aoa_rad: rmse(|e| e.aoa_rad),
        runs: trials.len(),
        wall_time_s: if trials.is_empty() {
            0.0
        } else {
            trials.iter().map(|t| t.wall_time_s).sum::<f64>() / trials.len() as f64
        },
    }
}
