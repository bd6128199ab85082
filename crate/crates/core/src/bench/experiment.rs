//! Monte Carlo experiments. Every trial derives its own seed from the master
//! seed and the trial index, so results do not depend on scheduling.

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::method::{MethodSpec, RangeStage};
use super::metrics::{aggregate, classify, AggregateReport, Resolutions, TrialMetrics};
use super::pipeline::{
    finalize_estimates, range_stage, run_pipeline, solve_bin, Acquisition, BinResult, DopplerAngleContext,
    PipelineOutput,
};
use crate::error::{Error, Result};
use crate::range::{range_dft, DetectionThreshold};
use crate::rng::derive_seed;
use crate::scene::{
    build_grids, sample_grid_scene, sample_scene, sample_transceiver, ArrayKind, GridRequest, ParamGrids, RadarConfig,
    SceneBounds, TargetScene,
};
use crate::synth::{synthesize_approx, synthesize_exact, CalibrationSpec, IfCube, NoiseSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SignalModel {
    /// Full per-sample delay, including calibration errors.
    Exact,
    /// Separable model; calibration errors are not applied.
    Approx,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SceneSpec {
    pub targets: usize,
    pub bounds: SceneBounds,
    /// Place targets on range-bin centres and Doppler/angle grid points.
    pub on_grid: bool,
}

impl Default for SceneSpec {
    fn default() -> Self {
        SceneSpec {
            targets: 5,
            bounds: SceneBounds::default(),
            on_grid: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub radar: RadarConfig,
    pub array: ArrayKind,
    pub grids: GridRequest,
    pub scene: SceneSpec,
    pub model: SignalModel,
    /// `None` means noiseless.
    pub snr_db: Option<f64>,
    pub calibration: CalibrationSpec,
    pub method: MethodSpec,
    /// Hit windows; defaults to [`Resolutions::for_method`].
    pub resolutions: Option<Resolutions>,
}

impl ExperimentConfig {
    /// Random 5-target scenes at 30 dB on the experiment grids.
    pub fn standard(method: MethodSpec) -> Self {
        ExperimentConfig {
            radar: RadarConfig::automotive_24ghz(),
            array: ArrayKind::RandomSla,
            grids: GridRequest::experiment_default(),
            scene: SceneSpec::default(),
            model: SignalModel::Exact,
            snr_db: Some(30.0),
            calibration: CalibrationSpec::none(),
            method,
            resolutions: None,
        }
    }

    pub fn noise(&self) -> NoiseSpec {
        self.snr_db.map_or(NoiseSpec::noiseless(), NoiseSpec::from_snr_db)
    }

    pub fn build_grids(&self) -> Result<ParamGrids> {
        build_grids(&self.radar, &self.grids)
    }

    pub fn resolutions(&self, grids: &ParamGrids) -> Resolutions {
        self.resolutions
            .unwrap_or_else(|| Resolutions::for_method(self.method.name, &self.radar, grids))
    }

    pub fn validate(&self) -> Result<()> {
        self.radar.validate()?;
        self.method.validate()?;
        if self.scene.targets == 0 {
            return Err(Error::invalid("scene.targets", "must be >= 1"));
        }
        if self.array == ArrayKind::UlaReference && !self.method.is_full_measurement() {
            return Err(Error::invalid(
                "array",
                "sparse methods need a random or transceiver array",
            ));
        }
        Ok(())
    }

    /// Acquisition used by this experiment's method for a trial seed.
    pub fn acquisition(&self, seed: u64) -> Result<Acquisition> {
        if self.method.is_full_measurement() {
            return Acquisition::full_ula(&self.radar);
        }
        let mut acq = Acquisition::sparse(&self.radar, seed)?;
        if self.array == ArrayKind::Transceiver {
            acq.geometry = sample_transceiver(&self.radar, seed)?;
        }
        Ok(acq)
    }

    pub fn scene(&self, grids: &ParamGrids, seed: u64) -> Result<TargetScene> {
        if self.scene.on_grid {
            sample_grid_scene(self.scene.targets, &self.radar, grids, self.scene.bounds.range_m, seed)
        } else {
            sample_scene(self.scene.targets, &self.scene.bounds, seed)
        }
    }

    pub fn synthesize(&self, scene: &TargetScene, acq: &Acquisition, seed: u64) -> Result<IfCube> {
        match self.model {
            SignalModel::Exact => synthesize_exact(
                scene,
                &acq.geometry,
                &acq.schedule,
                &acq.config,
                &self.noise(),
                &self.calibration,
                seed,
            ),
            SignalModel::Approx => {
                synthesize_approx(scene, &acq.geometry, &acq.schedule, &acq.config, &self.noise(), seed)
            }
        }
    }
}

/// Truth and untrimmed output of one trial.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub seed: u64,
    pub truth: TargetScene,
    pub output: PipelineOutput,
}

impl TrialRecord {
    pub fn metrics(&self, support_threshold: f64, res: &Resolutions) -> TrialMetrics {
        let est = finalize_estimates(&self.output.bins, support_threshold);
        let mut m = classify(&est, &self.truth, res);
        m.wall_time_s = self.output.wall_time_s;
        m
    }
}

fn trial_seed(seed: u64, index: usize) -> u64 {
    derive_seed(seed, "trial", index as u64)
}

/// One trial: draw acquisition and scene, synthesise, estimate.
pub fn run_trial(exp: &ExperimentConfig, grids: &ParamGrids, seed: u64) -> Result<TrialRecord> {
    let acq = exp.acquisition(seed)?;
    let truth = exp.scene(grids, seed)?;
    let cube = exp.synthesize(&truth, &acq, seed)?;
    let output = run_pipeline(&cube, &exp.method, grids, &acq, exp.noise().variance)?;
    Ok(TrialRecord { seed, truth, output })
}

pub(crate) fn run_trials(
    exp: &ExperimentConfig,
    grids: &ParamGrids,
    n_runs: usize,
    seed: u64,
) -> Result<Vec<TrialRecord>> {
    (0..n_runs)
        .into_par_iter()
        .map(|i| run_trial(exp, grids, trial_seed(seed, i)))
        .collect()
}

fn report(exp: &ExperimentConfig, records: &[TrialRecord], threshold: f64, res: &Resolutions) -> AggregateReport {
    let m: Vec<TrialMetrics> = records.iter().map(|r| r.metrics(threshold, res)).collect();
    aggregate(
        &m,
        exp.method.name,
        exp.snr_db.unwrap_or(f64::INFINITY),
        exp.calibration.sigma_theta_rad,
        exp.calibration.sigma_r_m,
    )
}

/// Independent trials aggregated at the method's support threshold.
pub fn monte_carlo(exp: &ExperimentConfig, n_runs: usize, seed: u64) -> Result<AggregateReport> {
    if n_runs == 0 {
        return Err(Error::invalid("runs", "must be >= 1"));
    }
    exp.validate()?;
    let grids = exp.build_grids()?;
    let records = run_trials(exp, &grids, n_runs, seed)?;
    Ok(report(
        exp,
        &records,
        exp.method.support_threshold,
        &exp.resolutions(&grids),
    ))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdCalibration {
    pub threshold: f64,
    pub fa_rate: f64,
    pub hit_rate: f64,
    /// `(threshold, fa_rate, hit_rate)` for every candidate.
    pub sweep: Vec<(f64, f64, f64)>,
}

/// Picks the support threshold whose false-alarm rate is nearest `target_fa` on a
/// pre-pass of trials drawn from a seed stream separate from evaluation.
pub fn calibrate_support_threshold(
    exp: &ExperimentConfig,
    candidates: &[f64],
    target_fa: f64,
    n_runs: usize,
    seed: u64,
) -> Result<ThresholdCalibration> {
    if candidates.is_empty() || n_runs == 0 {
        return Err(Error::invalid("calibration", "needs candidates and at least one run"));
    }
    exp.validate()?;
    let grids = exp.build_grids()?;
    let res = exp.resolutions(&grids);
    let records = run_trials(exp, &grids, n_runs, derive_seed(seed, "threshold-calibration", 0))?;
    let sweep: Vec<(f64, f64, f64)> = candidates
        .iter()
        .map(|&t| {
            let r = report(exp, &records, t, &res);
            (t, r.fa_rate, r.hit_rate)
        })
        .collect();
    let best = sweep
        .iter()
        .copied()
        .fold(None::<(f64, f64, f64)>, |acc, s| match acc {
            Some(a) if (a.1 - target_fa).abs() <= (s.1 - target_fa).abs() => Some(a),
            _ => Some(s),
        })
        .expect("non-empty");
    Ok(ThresholdCalibration {
        threshold: best.0,
        fa_rate: best.1,
        hit_rate: best.2,
        sweep,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RocPoint {
    pub threshold: DetectionThreshold,
    pub fa_rate: f64,
    pub hit_rate: f64,
}

/// Sweeps the range detection threshold. Doppler-angle solutions are cached per
/// bin within a trial, so each bin is solved once for all thresholds.
pub fn roc_sweep(
    exp: &ExperimentConfig,
    thresholds: &[DetectionThreshold],
    n_runs: usize,
    seed: u64,
) -> Result<Vec<RocPoint>> {
    if thresholds.len() < 2 {
        return Err(Error::invalid("thresholds", "need at least two"));
    }
    if n_runs == 0 {
        return Err(Error::invalid("runs", "must be >= 1"));
    }
    exp.validate()?;
    let grids = exp.build_grids()?;
    let res = exp.resolutions(&grids);
    let with = |t: DetectionThreshold| -> Result<RangeStage> {
        match &exp.method.range_stage {
            RangeStage::DftBinary { fraction, .. } => Ok(RangeStage::DftBinary {
                threshold: t,
                fraction: *fraction,
            }),
            RangeStage::DftCoherent { .. } => Ok(RangeStage::DftCoherent { threshold: t }),
            RangeStage::RangeOmp { .. } => Err(Error::Unsupported("ROC sweeps need a DFT range stage".into())),
        }
    };
    let stages: Vec<RangeStage> = thresholds.iter().map(|&t| with(t)).collect::<Result<_>>()?;
    let per_trial: Vec<Vec<TrialMetrics>> = (0..n_runs)
        .into_par_iter()
        .map(|i| -> Result<Vec<TrialMetrics>> {
            let s = trial_seed(seed, i);
            let acq = exp.acquisition(s)?;
            let truth = exp.scene(&grids, s)?;
            let cube = exp.synthesize(&truth, &acq, s)?;
            let start = Instant::now();
            let spectrum = range_dft(&cube);
            let ctx = DopplerAngleContext::new(&acq, &grids, &exp.method.doppler_angle_stage)?;
            let mut cache: BTreeMap<usize, BinResult> = BTreeMap::new();
            let mut out = Vec::with_capacity(stages.len());
            for st in &stages {
                let bins = range_stage(&cube, &spectrum, st, &acq, &grids)?;
                let mut results = Vec::with_capacity(bins.len());
                for (bin, range_m) in bins {
                    if !cache.contains_key(&bin) {
                        let candidates = solve_bin(
                            &spectrum,
                            &acq,
                            &ctx,
                            &exp.method.doppler_angle_stage,
                            &grids,
                            exp.noise().variance,
                            bin,
                        )?;
                        cache.insert(
                            bin,
                            BinResult {
                                bin,
                                range_m,
                                candidates,
                            },
                        );
                    }
                    results.push(cache[&bin].clone());
                }
                let est = finalize_estimates(&results, exp.method.support_threshold);
                let mut m = classify(&est, &truth, &res);
                m.wall_time_s = start.elapsed().as_secs_f64();
                out.push(m);
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    Ok(thresholds
        .iter()
        .enumerate()
        .map(|(k, &threshold)| {
            let ms: Vec<TrialMetrics> = per_trial.iter().map(|t| t[k].clone()).collect();
            let r = aggregate(&ms, exp.method.name, exp.snr_db.unwrap_or(f64::INFINITY), 0.0, 0.0);
            RocPoint {
                threshold,
                fa_rate: r.fa_rate,
                hit_rate: r.hit_rate,
            }
        })
        .collect())
}

/// Area under the ROC polyline through `(0, 0)`, the points sorted by
/// false-alarm rate, and `(1, 1)`.
pub fn roc_area(points: &[RocPoint]) -> f64 {
    let mut p: Vec<(f64, f64)> = points.iter().map(|r| (r.fa_rate, r.hit_rate)).collect();
    p.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let mut prev = (0.0, 0.0);
    let mut area = 0.0;
    for &q in p.iter().chain(std::iter::once(&(1.0, 1.0))) {
        area += (q.0 - prev.0) * 0.5 * (q.1 + prev.1);
        prev = q;
    }
    area
}

/// One aggregate per `(σ_θ, σ_r)` cell and method, at the experiment's SNR.
pub fn calibration_sweep(
    base: &ExperimentConfig,
    sigma_theta_rad: &[f64],
    sigma_r_m: &[f64],
    methods: &[MethodSpec],
    n_runs: usize,
    seed: u64,
) -> Result<Vec<AggregateReport>> {
    let mut out = Vec::new();
    for &st in sigma_theta_rad {
        for &sr in sigma_r_m {
            if !(st >= 0.0 && sr >= 0.0) {
                return Err(Error::invalid("calibration", "error scales must be non-negative"));
            }
            for m in methods {
                let exp = ExperimentConfig {
                    calibration: CalibrationSpec {
                        sigma_theta_rad: st,
                        sigma_r_m: sr,
                    },
                    method: m.clone(),
                    ..base.clone()
                };
                out.push(monte_carlo(&exp, n_runs, seed)?);
            }
        }
    }
    Ok(out)
}
