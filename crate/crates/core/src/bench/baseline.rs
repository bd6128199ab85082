//! Classical processing of the full uniform array: a 2D DFT over chirps and
//! unique virtual positions in every range bin, detection on the per-bin peak
//! of that map, then Doppler-angle peaks in each detected bin.

use num_complex::Complex64;
use rustfft::FftPlanner;

use super::method::{MethodName, MethodSpec};
use super::pipeline::{run_pipeline, Acquisition, Candidate, PipelineOutput};
use crate::error::{Error, Result};
use crate::range::RangeSpectrum;
use crate::scene::ParamGrids;
use crate::synth::{CubeDims, IfCube};

/// Spacing of the reference virtual array, in wavelengths.
const VIRTUAL_SPACING_WL: f64 = 0.5;

/// Full-array baseline with default thresholds.
pub fn classical_dft_baseline(cube: &IfCube, acq: &Acquisition, grids: &ParamGrids) -> Result<PipelineOutput> {
    run_pipeline(cube, &MethodSpec::standard(MethodName::ClassicalDft), grids, acq, 0.0)
}

fn signed(k: usize, n: usize) -> isize {
    if k >= n.div_ceil(2) {
        k as isize - n as isize
    } else {
        k as isize
    }
}

/// Magnitudes of the unitary 2D DFT of one bin, position-major, with the
/// number of positions and chirp slots.
struct DftMap {
    mag: Vec<f64>,
    positions: usize,
    slots: usize,
}

fn dft2d_map(spectrum: &RangeSpectrum, acq: &Acquisition, bin: usize) -> Result<DftMap> {
    if !acq.is_full() {
        return Err(Error::Unsupported("2D DFT needs the full array and chirp set".into()));
    }
    if bin >= spectrum.bins() {
        return Err(Error::OutOfRange {
            index: bin,
            len: spectrum.bins(),
        });
    }
    let cfg = &acq.config;
    let dims = CubeDims::of(cfg);
    let half_a = cfg.aperture_wavelengths() / 2.0;
    let xi = acq.geometry.virtual_positions();
    let pos: Vec<f64> = xi.iter().map(|x| x * half_a).collect();
    let x0 = pos.iter().copied().fold(f64::INFINITY, f64::min);
    let idx: Vec<usize> = pos
        .iter()
        .map(|x| ((x - x0) / VIRTUAL_SPACING_WL).round() as usize)
        .collect();
    let v = idx.iter().max().map_or(0, |m| m + 1);
    let pm = cfg.chirps_per_cpi_max;

    // Average channels sharing a virtual position.
    let mut grid = vec![Complex64::new(0.0, 0.0); v * pm];
    let mut counts = vec![0usize; v];
    for (ch, &k) in idx.iter().enumerate() {
        counts[k] += 1;
        let (n, m) = (ch / dims.rx, ch % dims.rx);
        for (p, &z) in acq.schedule.indices.iter().enumerate() {
            grid[k * pm + z] += spectrum.get(dims.row_index(n, m, p), bin);
        }
    }
    for (k, &c) in counts.iter().enumerate() {
        if c == 0 {
            return Err(Error::Unsupported("virtual array has gaps".into()));
        }
        for z in 0..pm {
            grid[k * pm + z] /= c as f64;
        }
    }

    let mut planner = FftPlanner::new();
    let f_chirp = planner.plan_fft_forward(pm);
    let f_pos = planner.plan_fft_forward(v);
    f_chirp.process(&mut grid);
    let mut col = vec![Complex64::new(0.0, 0.0); v];
    for z in 0..pm {
        for k in 0..v {
            col[k] = grid[k * pm + z];
        }
        f_pos.process(&mut col);
        for k in 0..v {
            grid[k * pm + z] = col[k];
        }
    }
    let scale = 1.0 / ((v * pm) as f64).sqrt();
    Ok(DftMap {
        mag: grid.iter().map(|z| z.norm() * scale).collect(),
        positions: v,
        slots: pm,
    })
}

/// Coherently focused range profile: the peak of each bin's 2D DFT map.
pub(crate) fn focused_range_profile(spectrum: &RangeSpectrum, acq: &Acquisition) -> Result<Vec<Complex64>> {
    (0..spectrum.bins())
        .map(|l| {
            let m = dft2d_map(spectrum, acq, l)?;
            Ok(Complex64::new(m.mag.iter().copied().fold(0.0, f64::max), 0.0))
        })
        .collect()
}

/// Peaks (3×3 local maxima, wrapping) of the 2D DFT map of one bin.
pub(crate) fn dft2d_candidates(spectrum: &RangeSpectrum, acq: &Acquisition, bin: usize) -> Result<Vec<Candidate>> {
    let DftMap {
        mag,
        positions: v,
        slots: pm,
    } = dft2d_map(spectrum, acq, bin)?;
    let cfg = &acq.config;

    let at = |k: isize, q: isize| mag[(k.rem_euclid(v as isize) as usize) * pm + q.rem_euclid(pm as isize) as usize];
    let dv = cfg.velocity_resolution_mps();
    let mut out = Vec::new();
    for k in 0..v as isize {
        for q in 0..pm as isize {
            let m = at(k, q);
            if m <= 0.0 {
                continue;
            }
            let is_peak = (-1..=1).all(|a| (-1..=1).all(|b| (a == 0 && b == 0) || m >= at(k + a, q + b)));
            if is_peak {
                let ks = signed(k as usize, v) as f64;
                let s = (ks / (v as f64 * VIRTUAL_SPACING_WL)).clamp(-1.0, 1.0);
                out.push(Candidate {
                    velocity_mps: signed(q as usize, pm) as f64 * dv,
                    aoa_rad: s.asin(),
                    amplitude: m,
                });
            }
        }
    }
    Ok(out)
}
