//! Range estimation.
//!
//! The unitary fast-time DFT focuses every return at one range into a single bin
//! irrespective of velocity and angle. Bins are picked per row by peak
//! detection and then voted on (binary integration), or found on the coherent
//! average of all rows (classical processing). Range-OMP refines range on a
//! grid finer than the DFT bin width.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::scene::RadarConfig;
use crate::solvers::{omp_1d, OmpParams};
use crate::synth::IfCube;

/// Unitary DFT of every fast-time row, `rows × bins`, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct RangeSpectrum {
    rows: usize,
    bins: usize,
    data: Vec<Complex64>,
    samples_read: usize,
}

impl RangeSpectrum {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn bins(&self) -> usize {
        self.bins
    }

    pub fn row(&self, r: usize) -> &[Complex64] {
        &self.data[r * self.bins..(r + 1) * self.bins]
    }

    pub fn get(&self, r: usize, l: usize) -> Complex64 {
        self.data[r * self.bins + l]
    }

    /// Cube samples consumed to build the spectrum.
    pub fn samples_read(&self) -> usize {
        self.samples_read
    }
}

fn plan(n: usize) -> Arc<dyn Fft<f64>> {
    FftPlanner::new().plan_fft_forward(n)
}

/// N-point DFT with 1/√N scaling along fast time for each `(n, m, p)`.
pub fn range_dft(cube: &IfCube) -> RangeSpectrum {
    let dims = cube.dims();
    let n = dims.samples;
    let fft = plan(n);
    let scale = 1.0 / (n as f64).sqrt();
    let mut data = cube.as_slice().to_vec();
    if n > 0 {
        fft.process(&mut data);
    }
    data.iter_mut().for_each(|z| *z *= scale);
    RangeSpectrum {
        rows: dims.rows(),
        bins: n,
        data,
        samples_read: cube.sample_count(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "kebab-case")]
pub enum DetectionThreshold {
    /// Fraction of the row maximum, in (0, 1].
    Relative(f64),
    /// Absolute magnitude level.
    Absolute(f64),
}

/// Bins that are local maxima over their 3-bin neighbourhood and reach the
/// threshold. Neighbourhoods wrap around the spectrum edges. Ties, up to a
/// round-off tolerance of `1e-9` times the row maximum, are kept.
pub fn detect_bins(row: &[Complex64], threshold: DetectionThreshold) -> Vec<usize> {
    let mags: Vec<f64> = row.iter().map(|z| z.norm()).collect();
    let n = mags.len();
    let max = mags.iter().copied().fold(0.0, f64::max);
    if n == 0 || max == 0.0 {
        return Vec::new();
    }
    let level = match threshold {
        DetectionThreshold::Relative(f) => f * max,
        DetectionThreshold::Absolute(a) => a,
    };
    let tie = 1e-9 * max;
    (0..n)
        .filter(|&l| {
            let v = mags[l];
            v > 0.0
                && v >= level
                && (n < 2 || v + tie >= mags[(l + n - 1) % n])
                && (n < 3 || v + tie >= mags[(l + 1) % n])
        })
        .collect()
}

/// Voted range bins.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RangeDetections {
    pub detected_bins: Vec<usize>,
    /// Votes per bin, indexed by bin.
    pub votes: Vec<usize>,
    pub rows: usize,
    pub estimated_ranges_m: Vec<f64>,
}

/// Keeps bins detected in at least `fraction` of the rows. A bin counts once per row.
pub fn binary_integrate(
    per_row: &[Vec<usize>],
    bins: usize,
    fraction: f64,
    config: &RadarConfig,
) -> Result<RangeDetections> {
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(Error::invalid("fraction", format!("must be in (0, 1], got {fraction}")));
    }
    let mut votes = vec![0usize; bins];
    for row in per_row {
        let mut seen = row.clone();
        seen.sort_unstable();
        seen.dedup();
        for l in seen {
            if l >= bins {
                return Err(Error::OutOfRange { index: l, len: bins });
            }
            votes[l] += 1;
        }
    }
    let need = fraction * per_row.len() as f64;
    let detected_bins: Vec<usize> = (0..bins)
        .filter(|&l| votes[l] > 0 && votes[l] as f64 >= need - 1e-9)
        .collect();
    let estimated_ranges_m = detected_bins
        .iter()
        .map(|&l| bin_to_range(l, config))
        .collect::<Result<_>>()?;
    Ok(RangeDetections {
        detected_bins,
        votes,
        rows: per_row.len(),
        estimated_ranges_m,
    })
}

/// Complex mean over all rows.
pub fn coherent_integrate(spectrum: &RangeSpectrum) -> Vec<Complex64> {
    let mut acc = vec![Complex64::new(0.0, 0.0); spectrum.bins];
    for r in 0..spectrum.rows {
        for (a, v) in acc.iter_mut().zip(spectrum.row(r)) {
            *a += v;
        }
    }
    let k = spectrum.rows.max(1) as f64;
    acc.iter_mut().for_each(|a| *a /= k);
    acc
}

/// `R = c·l/(2γT_c)`.
pub fn bin_to_range(l: usize, config: &RadarConfig) -> Result<f64> {
    let n = config.fast_time_samples();
    if l >= n {
        return Err(Error::OutOfRange { index: l, len: n });
    }
    Ok(l as f64 * config.range_resolution_m())
}

/// Nearest bin to `R`, ties away from zero, folded modulo N.
pub fn range_to_bin(range_m: f64, config: &RadarConfig) -> Result<usize> {
    if !(range_m >= 0.0) || !range_m.is_finite() {
        return Err(Error::invalid(
            "range_m",
            format!("must be finite and >= 0, got {range_m}"),
        ));
    }
    let x = range_m / config.range_resolution_m();
    // Snap values within rounding noise of a half-integer before rounding.
    let snapped = if ((x - x.floor()) - 0.5).abs() < 1e-9 {
        x.floor() + 0.5
    } else {
        x
    };
    Ok((snapped.round() as usize) % config.fast_time_samples())
}

/// Fine-grid range atoms `a(Ω)[t] = e^{j2πΩt}` with `Ω = γ(2ω/c)/f_s`.
pub fn build_range_dictionary(grid_m: &[f64], config: &RadarConfig) -> Result<CMatrix> {
    if grid_m.is_empty() {
        return Err(Error::invalid("range_grid_m", "grid is empty"));
    }
    let n = config.fast_time_samples();
    let k = config.chirp_rate_hz_per_s * 2.0 / (config.propagation_speed_mps * config.sampling_frequency_hz);
    Ok(CMatrix::from_fn(n, grid_m.len(), |t, g| {
        let cycles = k * grid_m[g] * t as f64;
        Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * (cycles - cycles.round()))
    }))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RangeOmpParams {
    pub omp: OmpParams,
    /// Report atoms at or above this fraction of the largest coefficient.
    pub amplitude_threshold: f64,
}

impl Default for RangeOmpParams {
    fn default() -> Self {
        RangeOmpParams {
            omp: OmpParams::default(),
            amplitude_threshold: 0.1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RangeEstimate {
    pub range_m: f64,
    pub coefficient: Complex64,
}

/// OMP on one fast-time vector against the fine range grid.
pub fn range_omp(
    y: &[Complex64],
    grid_m: &[f64],
    config: &RadarConfig,
    params: &RangeOmpParams,
) -> Result<Vec<RangeEstimate>> {
    let dict = build_range_dictionary(grid_m, config)?;
    range_omp_with(y, &dict, grid_m, params)
}

/// [`range_omp`] with a prebuilt dictionary.
pub fn range_omp_with(
    y: &[Complex64],
    dict: &CMatrix,
    grid_m: &[f64],
    params: &RangeOmpParams,
) -> Result<Vec<RangeEstimate>> {
    if dict.cols() != grid_m.len() {
        return Err(Error::DimensionMismatch("range dictionary vs grid".into()));
    }
    let sol = omp_1d(y, dict, &params.omp)?.threshold(params.amplitude_threshold);
    Ok(sol
        .atoms
        .iter()
        .zip(&sol.coefficients)
        .map(|(&g, &coefficient)| RangeEstimate {
            range_m: grid_m[g],
            coefficient,
        })
        .collect())
}
