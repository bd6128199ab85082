//! IF data cube synthesis.
//!
//! Two models are provided. [`synthesize_exact`] evaluates the mixer output for
//! the full per-sample delay (range, Doppler and angle terms together, including
//! the residual video phase). [`synthesize_approx`] uses the separable product
//! of three complex exponentials, which drops the cross terms.

use std::f64::consts::PI;
use std::io::{Read, Write};

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng;
use crate::scene::{ArrayGeometry, ChirpSchedule, RadarConfig, Target, TargetScene};

/// Header magic of the binary cube dump.
pub const CUBE_MAGIC: &[u8; 16] = b"FMCW-IFCUBE-V1\0\0";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CubeDims {
    pub tx: usize,
    pub rx: usize,
    pub chirps: usize,
    pub samples: usize,
}

impl CubeDims {
    pub fn of(config: &RadarConfig) -> Self {
        CubeDims {
            tx: config.tx_count,
            rx: config.rx_count,
            chirps: config.chirps_transmitted,
            samples: config.fast_time_samples(),
        }
    }

    /// Number of fast-time rows, one per (n, m, p).
    pub fn rows(&self) -> usize {
        self.tx * self.rx * self.chirps
    }

    pub fn len(&self) -> usize {
        self.rows() * self.samples
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn channels(&self) -> usize {
        self.tx * self.rx
    }

    pub fn row_index(&self, n: usize, m: usize, p: usize) -> usize {
        (n * self.rx + m) * self.chirps + p
    }
}

/// Complex IF samples `y[n, m, p, t]`, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct IfCube {
    dims: CubeDims,
    data: Vec<Complex64>,
}

impl IfCube {
    pub fn new(dims: CubeDims, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != dims.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} samples for dims {:?}",
                data.len(),
                dims
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::invalid("cube", "non-finite sample"));
        }
        Ok(IfCube { dims, data })
    }

    pub fn dims(&self) -> CubeDims {
        self.dims
    }

    pub fn get(&self, n: usize, m: usize, p: usize, t: usize) -> Complex64 {
        self.data[self.dims.row_index(n, m, p) * self.dims.samples + t]
    }

    /// Fast-time row `r` where `r = (n·N_R + m)·P + p`.
    pub fn row(&self, r: usize) -> &[Complex64] {
        let n = self.dims.samples;
        &self.data[r * n..(r + 1) * n]
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    /// Total number of complex samples held.
    pub fn sample_count(&self) -> usize {
        self.data.len()
    }

    /// Writes the binary dump: 32-byte header (16-byte magic, then N_T, N_R, P, N
    /// as little-endian u32), followed by little-endian f64 (re, im) pairs.
    pub fn write_to(&self, mut w: impl Write) -> Result<()> {
        let d = self.dims;
        let mut header = [0u8; 32];
        header[..16].copy_from_slice(CUBE_MAGIC);
        for (k, v) in [d.tx, d.rx, d.chirps, d.samples].into_iter().enumerate() {
            let v = u32::try_from(v).map_err(|_| Error::CubeFormat("dimension exceeds u32".into()))?;
            header[16 + 4 * k..20 + 4 * k].copy_from_slice(&v.to_le_bytes());
        }
        w.write_all(&header)?;
        let mut buf = Vec::with_capacity(16 * self.data.len());
        for z in &self.data {
            buf.extend_from_slice(&z.re.to_le_bytes());
            buf.extend_from_slice(&z.im.to_le_bytes());
        }
        w.write_all(&buf)?;
        Ok(())
    }

    pub fn read_from(mut r: impl Read) -> Result<Self> {
        let mut header = [0u8; 32];
        r.read_exact(&mut header)
            .map_err(|_| Error::CubeFormat("truncated header".into()))?;
        if &header[..16] != CUBE_MAGIC {
            return Err(Error::CubeFormat("bad magic".into()));
        }
        let field = |k: usize| u32::from_le_bytes(header[16 + 4 * k..20 + 4 * k].try_into().unwrap()) as usize;
        let dims = CubeDims {
            tx: field(0),
            rx: field(1),
            chirps: field(2),
            samples: field(3),
        };
        let mut bytes = Vec::new();
        r.read_to_end(&mut bytes)?;
        if bytes.len() != 16 * dims.len() {
            return Err(Error::CubeFormat(format!(
                "expected {} payload bytes, found {}",
                16 * dims.len(),
                bytes.len()
            )));
        }
        let data = bytes
            .chunks_exact(16)
            .map(|c| {
                Complex64::new(
                    f64::from_le_bytes(c[..8].try_into().unwrap()),
                    f64::from_le_bytes(c[8..].try_into().unwrap()),
                )
            })
            .collect();
        IfCube::new(dims, data).map_err(|e| Error::CubeFormat(e.to_string()))
    }
}

/// Beat, Doppler and spatial frequencies of one target.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormalizedFrequencies {
    /// Cycles per fast-time sample.
    pub omega_range: f64,
    /// Cycles per chirp slot.
    pub omega_doppler: f64,
    /// Cycles per unit of `α + β`.
    pub omega_angle: f64,
}

pub fn normalized_frequencies(target: &Target, config: &RadarConfig) -> NormalizedFrequencies {
    let c = config.propagation_speed_mps;
    let lambda = config.wavelength_m();
    NormalizedFrequencies {
        omega_range: config.chirp_rate_hz_per_s * (2.0 * target.range_m / c) / config.sampling_frequency_hz,
        omega_doppler: 2.0 * target.velocity_mps * config.chirp_duration_s / lambda,
        omega_angle: config.aperture_m() * target.aoa_rad.sin() / (2.0 * lambda),
    }
}

/// Additive circular complex Gaussian noise of variance σ² per sample.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    pub variance: f64,
}

impl NoiseSpec {
    /// σ² = 10^(−SNR/10) for unit-power targets.
    pub fn from_snr_db(snr_db: f64) -> Self {
        NoiseSpec {
            variance: 10f64.powf(-snr_db / 10.0),
        }
    }

    pub fn noiseless() -> Self {
        NoiseSpec { variance: 0.0 }
    }

    pub fn snr_db(&self) -> f64 {
        -10.0 * self.variance.log10()
    }
}

/// Per-channel phase errors `N(0, σ_θ²)` and per-target range errors uniform with
/// standard deviation `σ_r`. Zero means perfect calibration.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CalibrationSpec {
    pub sigma_theta_rad: f64,
    pub sigma_r_m: f64,
}

impl CalibrationSpec {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn is_none(&self) -> bool {
        self.sigma_theta_rad == 0.0 && self.sigma_r_m == 0.0
    }
}

fn check_dims(geometry: &ArrayGeometry, schedule: &ChirpSchedule, config: &RadarConfig) -> Result<CubeDims> {
    config.validate()?;
    if geometry.tx_positions.len() != config.tx_count || geometry.rx_positions.len() != config.rx_count {
        return Err(Error::DimensionMismatch(format!(
            "geometry is {}×{}, config expects {}×{}",
            geometry.tx_positions.len(),
            geometry.rx_positions.len(),
            config.tx_count,
            config.rx_count
        )));
    }
    if schedule.len() != config.chirps_transmitted || schedule.p_max != config.chirps_per_cpi_max {
        return Err(Error::DimensionMismatch(format!(
            "schedule has {} of {} chirps, config expects {} of {}",
            schedule.len(),
            schedule.p_max,
            config.chirps_transmitted,
            config.chirps_per_cpi_max
        )));
    }
    if schedule.indices.iter().any(|&z| z >= schedule.p_max) {
        return Err(Error::invalid("schedule", "chirp index beyond P_max"));
    }
    Ok(CubeDims::of(config))
}

/// `e^{j2πx}` with `x` reduced modulo 1 first to keep large cycle counts accurate.
fn cis_cycles(x: f64) -> Complex64 {
    let f = x - x.round();
    Complex64::from_polar(1.0, 2.0 * PI * f)
}

fn add_noise(data: &mut [Complex64], noise: &NoiseSpec, seed: u64) -> Result<()> {
    if !(noise.variance >= 0.0 && noise.variance.is_finite()) {
        return Err(Error::invalid("noise.variance", "must be finite and >= 0"));
    }
    if noise.variance == 0.0 {
        return Ok(());
    }
    let normal = Normal::new(0.0, (noise.variance / 2.0).sqrt()).expect("valid std");
    let mut r = rng::stream(seed, "noise", 0);
    for z in data.iter_mut() {
        *z += Complex64::new(normal.sample(&mut r), normal.sample(&mut r));
    }
    Ok(())
}

/// Mixer output using the full delay `τ = 2R/c + 2νζT_c/c + A sinθ(α+β)/(2c)`.
pub fn synthesize_exact(
    scene: &TargetScene,
    geometry: &ArrayGeometry,
    schedule: &ChirpSchedule,
    config: &RadarConfig,
    noise: &NoiseSpec,
    calib: &CalibrationSpec,
    seed: u64,
) -> Result<IfCube> {
    let dims = check_dims(geometry, schedule, config)?;
    if !(calib.sigma_theta_rad >= 0.0 && calib.sigma_r_m >= 0.0) {
        return Err(Error::invalid("calibration", "error scales must be non-negative"));
    }
    let c = config.propagation_speed_mps;
    let gamma = config.chirp_rate_hz_per_s;
    let fs = config.sampling_frequency_hz;
    let fc = config.carrier_frequency_hz;
    let tc = config.chirp_duration_s;
    let aperture = config.aperture_m();

    let mut cal = rng::stream(seed, "calibration", 0);
    let phase_err: Vec<f64> = if calib.sigma_theta_rad > 0.0 {
        let nd = Normal::new(0.0, calib.sigma_theta_rad).expect("valid std");
        (0..dims.channels()).map(|_| nd.sample(&mut cal)).collect()
    } else {
        vec![0.0; dims.channels()]
    };
    let delay_err: Vec<f64> = if calib.sigma_r_m > 0.0 {
        let h = 3f64.sqrt() * calib.sigma_r_m;
        // Range-equivalent error converted to round-trip delay.
        scene
            .targets
            .iter()
            .map(|_| 2.0 * cal.random_range(-h..=h) / c)
            .collect()
    } else {
        vec![0.0; scene.targets.len()]
    };

    let mut data = vec![Complex64::new(0.0, 0.0); dims.len()];
    for n in 0..dims.tx {
        for m in 0..dims.rx {
            let xi = geometry.tx_positions[n] + geometry.rx_positions[m];
            let ch = n * dims.rx + m;
            let chan_phase = Complex64::from_polar(1.0, phase_err[ch]);
            for (p, &zeta) in schedule.indices.iter().enumerate() {
                let row = dims.row_index(n, m, p);
                let out = &mut data[row * dims.samples..(row + 1) * dims.samples];
                for (k, tgt) in scene.targets.iter().enumerate() {
                    let tau = 2.0 * tgt.range_m / c
                        + 2.0 * tgt.velocity_mps * zeta as f64 * tc / c
                        + aperture * tgt.aoa_rad.sin() * xi / (2.0 * c)
                        + delay_err[k];
                    let lead =
                        tgt.gain.conj() * cis_cycles(-0.5 * gamma * tau * tau) * cis_cycles(fc * tau) * chan_phase;
                    let step = gamma * tau / fs;
                    for (t, o) in out.iter_mut().enumerate() {
                        *o += lead * cis_cycles(step * t as f64);
                    }
                }
            }
        }
    }
    add_noise(&mut data, noise, seed)?;
    IfCube::new(dims, data)
}

/// Separable model `Σ ã* e^{j2πΩ_R t} e^{j2πΩ_D ζ} e^{j2πΩ_θ(α+β)}` with
/// `ã = a·e^{jπγτ_R²}·e^{−j2πf_cτ_R}`.
pub fn synthesize_approx(
    scene: &TargetScene,
    geometry: &ArrayGeometry,
    schedule: &ChirpSchedule,
    config: &RadarConfig,
    noise: &NoiseSpec,
    seed: u64,
) -> Result<IfCube> {
    let dims = check_dims(geometry, schedule, config)?;
    let mut data = vec![Complex64::new(0.0, 0.0); dims.len()];
    for tgt in &scene.targets {
        let f = normalized_frequencies(tgt, config);
        let lead = effective_gain(tgt, config).conj();
        let fast: Vec<Complex64> = (0..dims.samples)
            .map(|t| cis_cycles(f.omega_range * t as f64))
            .collect();
        for n in 0..dims.tx {
            for m in 0..dims.rx {
                let xi = geometry.tx_positions[n] + geometry.rx_positions[m];
                let sp = cis_cycles(f.omega_angle * xi);
                for (p, &zeta) in schedule.indices.iter().enumerate() {
                    let w = lead * sp * cis_cycles(f.omega_doppler * zeta as f64);
                    let row = dims.row_index(n, m, p);
                    for (o, e) in data[row * dims.samples..(row + 1) * dims.samples].iter_mut().zip(&fast) {
                        *o += w * e;
                    }
                }
            }
        }
    }
    add_noise(&mut data, noise, seed)?;
    IfCube::new(dims, data)
}

/// `ã = a·e^{jπγτ_R²}·e^{−j2πf_cτ_R}`, the gain seen by the separable model.
pub fn effective_gain(target: &Target, config: &RadarConfig) -> Complex64 {
    let tau_r = 2.0 * target.range_m / config.propagation_speed_mps;
    target.gain
        * cis_cycles(0.5 * config.chirp_rate_hz_per_s * tau_r * tau_r)
        * cis_cycles(-config.carrier_frequency_hz * tau_r)
}
