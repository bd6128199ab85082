use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::baseline::{dft2d_candidates, focused_range_profile};
use super::method::{DopplerAngleStage, MethodSpec, RangeStage};
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::range::{
    bin_to_range, binary_integrate, build_range_dictionary, detect_bins, range_dft, range_omp_with, range_to_bin,
    RangeSpectrum,
};
use crate::scene::{
    build_ula_geometry, sample_chirp_schedule, sample_sla, ArrayGeometry, ChirpSchedule, ParamGrids, RadarConfig,
};
use crate::solvers::{
    basis_pursuit, build_angle_dictionary, build_doppler_dictionary, extract_range_slice, lasso, omp_1d, omp_2d,
    solution_to_estimates, KronOperator, SparseSolution,
};
use crate::synth::IfCube;

/// Realised measurement setup: configuration, element positions and chirp slots.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Acquisition {
    pub config: RadarConfig,
    pub geometry: ArrayGeometry,
    pub schedule: ChirpSchedule,
}

impl Acquisition {
    /// Random sparse array and random chirp subset.
    pub fn sparse(config: &RadarConfig, seed: u64) -> Result<Self> {
        config.validate()?;
        Ok(Acquisition {
            config: config.clone(),
            geometry: sample_sla(config, seed),
            schedule: sample_chirp_schedule(config.chirps_transmitted, config.chirps_per_cpi_max, seed)?,
        })
    }

    /// Reference 4×8 ULA with every chirp slot.
    pub fn full_ula(config: &RadarConfig) -> Result<Self> {
        let full = config.full_measurement();
        full.validate()?;
        Ok(Acquisition {
            geometry: build_ula_geometry(&full)?,
            schedule: ChirpSchedule::full(full.chirps_per_cpi_max),
            config: full,
        })
    }

    pub fn is_full(&self) -> bool {
        self.config.tx_count == 4 && self.config.rx_count == 8 && self.schedule.is_full()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub range_m: f64,
    pub velocity_mps: f64,
    pub aoa_rad: f64,
    pub amplitude: f64,
}

/// One Doppler-angle hypothesis in a range bin.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub velocity_mps: f64,
    pub aoa_rad: f64,
    pub amplitude: f64,
}

/// Untrimmed Doppler-angle output of one range bin.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BinResult {
    pub bin: usize,
    pub range_m: f64,
    pub candidates: Vec<Candidate>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PipelineOutput {
    pub estimates: Vec<Estimate>,
    pub bins: Vec<BinResult>,
    /// Complex cube samples read by the estimator.
    pub samples_consumed: usize,
    pub wall_time_s: f64,
}

/// Keeps candidates at or above `rel` times the strongest candidate of the CPI.
pub fn finalize_estimates(bins: &[BinResult], rel: f64) -> Vec<Estimate> {
    let mut out = Vec::new();
    let max = bins
        .iter()
        .flat_map(|b| &b.candidates)
        .map(|c| c.amplitude)
        .fold(0.0, f64::max);
    if max == 0.0 {
        return out;
    }
    for b in bins {
        out.extend(
            b.candidates
                .iter()
                .filter(|c| c.amplitude >= rel * max)
                .map(|c| Estimate {
                    range_m: b.range_m,
                    velocity_mps: c.velocity_mps,
                    aoa_rad: c.aoa_rad,
                    amplitude: c.amplitude,
                }),
        );
    }
    out
}

/// Detected range bins, each with the range reported for it.
pub(crate) fn range_stage(
    cube: &IfCube,
    spectrum: &RangeSpectrum,
    stage: &RangeStage,
    acq: &Acquisition,
    grids: &ParamGrids,
) -> Result<Vec<(usize, f64)>> {
    let config = &acq.config;
    match stage {
        RangeStage::DftBinary { threshold, fraction } => {
            let per_row: Vec<Vec<usize>> = (0..spectrum.rows())
                .map(|r| detect_bins(spectrum.row(r), *threshold))
                .collect();
            let det = binary_integrate(&per_row, spectrum.bins(), *fraction, config)?;
            Ok(det.detected_bins.into_iter().zip(det.estimated_ranges_m).collect())
        }
        RangeStage::DftCoherent { threshold } => {
            let row = focused_range_profile(spectrum, acq)?;
            detect_bins(&row, *threshold)
                .into_iter()
                .map(|l| Ok((l, bin_to_range(l, config)?)))
                .collect()
        }
        RangeStage::RangeOmp {
            params,
            binary_fraction,
        } => {
            let dict = build_range_dictionary(&grids.range_grid_m, config)?;
            // Strongest Range-OMP atom per DFT bin.
            let best_per_bin = |row: usize| -> Result<BTreeMap<usize, (f64, f64)>> {
                let mut best: BTreeMap<usize, (f64, f64)> = BTreeMap::new();
                for e in range_omp_with(cube.row(row), &dict, &grids.range_grid_m, params)? {
                    let l = range_to_bin(e.range_m, config)?;
                    let a = e.coefficient.norm();
                    let slot = best.entry(l).or_insert((e.range_m, a));
                    if a > slot.1 {
                        *slot = (e.range_m, a);
                    }
                }
                Ok(best)
            };
            match binary_fraction {
                None => Ok(best_per_bin(0)?.into_iter().map(|(l, (r, _))| (l, r)).collect()),
                Some(f) => {
                    let maps: Vec<BTreeMap<usize, (f64, f64)>> =
                        (0..spectrum.rows()).map(best_per_bin).collect::<Result<_>>()?;
                    let per_row: Vec<Vec<usize>> = maps.iter().map(|m| m.keys().copied().collect()).collect();
                    let det = binary_integrate(&per_row, spectrum.bins(), *f, config)?;
                    // Report the range of the strongest atom seen for the bin in any row.
                    Ok(det
                        .detected_bins
                        .into_iter()
                        .map(|l| {
                            let r = maps
                                .iter()
                                .filter_map(|m| m.get(&l))
                                .fold((0.0, -1.0), |acc, &(r, a)| if a > acc.1 { (r, a) } else { acc })
                                .0;
                            (l, r)
                        })
                        .collect())
                }
            }
        }
    }
}

/// Dictionaries shared by every range bin of one acquisition.
pub(crate) struct DopplerAngleContext {
    b: CMatrix,
    c: CMatrix,
    kron: Option<CMatrix>,
    op: Option<KronOperator>,
}

impl DopplerAngleContext {
    pub(crate) fn new(acq: &Acquisition, grids: &ParamGrids, stage: &DopplerAngleStage) -> Result<Self> {
        if matches!(stage, DopplerAngleStage::Dft2d) {
            return Ok(DopplerAngleContext {
                b: CMatrix::zeros(0, 0),
                c: CMatrix::zeros(0, 0),
                kron: None,
                op: None,
            });
        }
        let b = build_doppler_dictionary(&acq.schedule, &grids.doppler_grid_mps, &acq.config)?.matrix;
        let c = build_angle_dictionary(&acq.geometry, &grids.angle_grid_rad, &acq.config)?.matrix;
        let kron = match stage {
            DopplerAngleStage::Omp1d { .. } => Some(b.kron(&c)),
            _ => None,
        };
        let op = match stage {
            DopplerAngleStage::Bp { .. } | DopplerAngleStage::Lasso { .. } => {
                Some(KronOperator::new(b.clone(), c.clone()))
            }
            _ => None,
        };
        Ok(DopplerAngleContext { b, c, kron, op })
    }
}

/// Atoms whose modulus is at least that of every selected atom in their 3×3
/// Doppler-angle neighbourhood. On fine grids a single off-grid target
/// otherwise spreads over several adjacent atoms.
fn sparse_candidates(sol: &SparseSolution, grids: &ParamGrids) -> Result<Vec<Candidate>> {
    let ga = grids.angle_grid_rad.len() as isize;
    let gd = grids.doppler_grid_mps.len() as isize;
    let amp: BTreeMap<(isize, isize), f64> = sol
        .atoms
        .iter()
        .zip(&sol.coefficients)
        .map(|(&a, c)| ((a as isize / ga, a as isize % ga), c.norm()))
        .collect();
    let is_peak = |(d, a): (isize, isize), v: f64| {
        (-1..=1).all(|i| {
            (-1..=1).all(|j| {
                let (nd, na) = (d + i, a + j);
                (i == 0 && j == 0)
                    || nd < 0
                    || na < 0
                    || nd >= gd
                    || na >= ga
                    || amp.get(&(nd, na)).is_none_or(|&w| v >= w)
            })
        })
    };
    Ok(solution_to_estimates(sol, grids)?
        .into_iter()
        .zip(&sol.atoms)
        .filter(|(e, &a)| {
            let key = (a as isize / ga, a as isize % ga);
            e.coefficient.norm() > 0.0 && is_peak(key, e.coefficient.norm())
        })
        .map(|(e, _)| Candidate {
            velocity_mps: e.velocity_mps,
            aoa_rad: e.aoa_rad,
            amplitude: e.coefficient.norm(),
        })
        .collect())
}

/// Solves the Doppler-angle problem of one range bin.
pub(crate) fn solve_bin(
    spectrum: &RangeSpectrum,
    acq: &Acquisition,
    ctx: &DopplerAngleContext,
    stage: &DopplerAngleStage,
    grids: &ParamGrids,
    noise_variance: f64,
    bin: usize,
) -> Result<Vec<Candidate>> {
    let dims = crate::synth::CubeDims::of(&acq.config);
    if let DopplerAngleStage::Dft2d = stage {
        return dft2d_candidates(spectrum, acq, bin);
    }
    let y = extract_range_slice(spectrum, dims, bin)?;
    let kron = || ctx.kron.as_ref().expect("built for 1D-OMP");
    let op = || ctx.op.as_ref().expect("built for l1 stages");
    let sol = match stage {
        DopplerAngleStage::Omp1d { params } => omp_1d(&y.vectorized(), kron(), params)?,
        DopplerAngleStage::Omp2d { params } => omp_2d(&y.matrix, &ctx.c, &ctx.b, params)?,
        DopplerAngleStage::Bp { params, epsilon } => {
            let mut p = *params;
            // ‖w‖² has mean σ²MP and standard deviation σ²√(MP); allow two deviations.
            let mp = (dims.channels() * dims.chirps) as f64;
            p.epsilon = epsilon.unwrap_or_else(|| (noise_variance * (mp + 2.0 * mp.sqrt())).sqrt());
            basis_pursuit(&y.vectorized(), op(), &p)?
        }
        DopplerAngleStage::Lasso { params } => lasso(&y.vectorized(), op(), params)?,
        DopplerAngleStage::Dft2d => unreachable!(),
    };
    sparse_candidates(&sol, grids)
}

/// Range stage, then the Doppler-angle stage on every detected bin.
///
/// `noise_variance` only sets the default residual budget of basis pursuit.
pub fn run_pipeline(
    cube: &IfCube,
    method: &MethodSpec,
    grids: &ParamGrids,
    acq: &Acquisition,
    noise_variance: f64,
) -> Result<PipelineOutput> {
    method.validate()?;
    grids.validate(&acq.config)?;
    let dims = crate::synth::CubeDims::of(&acq.config);
    if cube.dims() != dims {
        return Err(Error::DimensionMismatch(format!(
            "cube {:?} vs acquisition {:?}",
            cube.dims(),
            dims
        )));
    }
    if method.is_full_measurement() && !acq.is_full() {
        return Err(Error::Unsupported(format!(
            "{} needs the full 4×8 ULA with all {} chirps",
            method.name, acq.config.chirps_per_cpi_max
        )));
    }
    let start = Instant::now();
    let spectrum = range_dft(cube);
    let bins = range_stage(cube, &spectrum, &method.range_stage, acq, grids)?;
    let ctx = DopplerAngleContext::new(acq, grids, &method.doppler_angle_stage)?;
    let results: Vec<BinResult> = bins
        .into_iter()
        .map(|(bin, range_m)| {
            Ok(BinResult {
                bin,
                range_m,
                candidates: solve_bin(
                    &spectrum,
                    acq,
                    &ctx,
                    &method.doppler_angle_stage,
                    grids,
                    noise_variance,
                    bin,
                )?,
            })
        })
        .collect::<Result<_>>()?;
    let estimates = finalize_estimates(&results, method.support_threshold);
    Ok(PipelineOutput {
        estimates,
        bins: results,
        samples_consumed: spectrum.samples_read(),
        wall_time_s: start.elapsed().as_secs_f64(),
    })
}
