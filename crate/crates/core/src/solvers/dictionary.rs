use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::SparseSolution;
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::range::RangeSpectrum;
use crate::scene::{ArrayGeometry, ChirpSchedule, ParamGrids, RadarConfig};
use crate::synth::CubeDims;

/// `B[p, g] = exp(j·4πT_c/λ·ρ_g·ζ_p)`, one column per Doppler grid point.
#[derive(Clone, Debug, PartialEq)]
pub struct DopplerDictionary {
    pub matrix: CMatrix,
    pub grid_mps: Vec<f64>,
    pub schedule: Vec<usize>,
}

/// `C[(n, m), g] = exp(j·πA/λ·sin φ_g·(α_n + β_m))`, rows in `(n, m)` order.
#[derive(Clone, Debug, PartialEq)]
pub struct AngleDictionary {
    pub matrix: CMatrix,
    pub grid_rad: Vec<f64>,
    pub virtual_positions: Vec<f64>,
}

fn cis(phase: f64) -> Complex64 {
    Complex64::from_polar(1.0, phase)
}

pub fn build_doppler_dictionary(
    schedule: &ChirpSchedule,
    grid_mps: &[f64],
    config: &RadarConfig,
) -> Result<DopplerDictionary> {
    if grid_mps.is_empty() || schedule.is_empty() {
        return Err(Error::invalid("doppler dictionary", "empty grid or schedule"));
    }
    let k = 4.0 * PI * config.chirp_duration_s / config.wavelength_m();
    let matrix = CMatrix::from_fn(schedule.len(), grid_mps.len(), |p, g| {
        // Reduce the phase modulo 2π through the cycle count for accuracy.
        let cycles = k * grid_mps[g] * schedule.indices[p] as f64 / (2.0 * PI);
        cis(2.0 * PI * (cycles - cycles.round()))
    });
    Ok(DopplerDictionary {
        matrix,
        grid_mps: grid_mps.to_vec(),
        schedule: schedule.indices.clone(),
    })
}

pub fn build_angle_dictionary(
    geometry: &ArrayGeometry,
    grid_rad: &[f64],
    config: &RadarConfig,
) -> Result<AngleDictionary> {
    let xi = geometry.virtual_positions();
    if grid_rad.is_empty() || xi.is_empty() {
        return Err(Error::invalid("angle dictionary", "empty grid or geometry"));
    }
    let k = PI * config.aperture_wavelengths();
    let matrix = CMatrix::from_fn(xi.len(), grid_rad.len(), |r, g| cis(k * grid_rad[g].sin() * xi[r]));
    Ok(AngleDictionary {
        matrix,
        grid_rad: grid_rad.to_vec(),
        virtual_positions: xi,
    })
}

/// Per-bin measurement `Y` (virtual channels × chirps).
#[derive(Clone, Debug, PartialEq)]
pub struct RangeSliceMeasurement {
    pub matrix: CMatrix,
    pub bin: usize,
}

impl RangeSliceMeasurement {
    /// `vec(Y)`, column-major with channels fastest.
    pub fn vectorized(&self) -> Vec<Complex64> {
        self.matrix.as_slice().to_vec()
    }
}

pub fn extract_range_slice(spectrum: &RangeSpectrum, dims: CubeDims, bin: usize) -> Result<RangeSliceMeasurement> {
    if bin >= spectrum.bins() {
        return Err(Error::OutOfRange {
            index: bin,
            len: spectrum.bins(),
        });
    }
    if spectrum.rows() != dims.rows() {
        return Err(Error::DimensionMismatch(format!(
            "spectrum has {} rows, dims imply {}",
            spectrum.rows(),
            dims.rows()
        )));
    }
    let matrix = CMatrix::from_fn(dims.channels(), dims.chirps, |ch, p| {
        let (n, m) = (ch / dims.rx, ch % dims.rx);
        spectrum.get(dims.row_index(n, m, p), bin)
    });
    Ok(RangeSliceMeasurement { matrix, bin })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DopplerAngleEstimate {
    pub velocity_mps: f64,
    pub aoa_rad: f64,
    pub coefficient: Complex64,
}

/// Maps flat atoms `doppler · G_θ + angle` to grid values.
pub fn solution_to_estimates(sol: &SparseSolution, grids: &ParamGrids) -> Result<Vec<DopplerAngleEstimate>> {
    let ga = grids.angle_grid_rad.len();
    let total = ga * grids.doppler_grid_mps.len();
    sol.atoms
        .iter()
        .zip(&sol.coefficients)
        .map(|(&a, &coefficient)| {
            if a >= total {
                return Err(Error::OutOfRange { index: a, len: total });
            }
            Ok(DopplerAngleEstimate {
                velocity_mps: grids.doppler_grid_mps[a / ga],
                aoa_rad: grids.angle_grid_rad[a % ga],
                coefficient,
            })
        })
        .collect()
}
