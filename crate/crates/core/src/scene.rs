//! Radar configuration, array geometry, chirp schedules, parameter grids and
//! target scenes.
//!
//! Element positions are stored as dimensionless fractions of the total
//! aperture `A`: a transmitter with position `α` sits at `A·α/2` metres.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng;

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Waveform, sampling, CPI and aperture parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadarConfig {
    pub carrier_frequency_hz: f64,
    pub chirp_rate_hz_per_s: f64,
    pub chirp_duration_s: f64,
    pub sampling_frequency_hz: f64,
    pub chirps_per_cpi_max: usize,
    pub chirps_transmitted: usize,
    pub tx_count: usize,
    pub rx_count: usize,
    pub tx_aperture_wavelengths: f64,
    pub rx_aperture_wavelengths: f64,
    /// Propagation speed used for every delay and wavelength conversion.
    pub propagation_speed_mps: f64,
}

impl RadarConfig {
    /// The 24 GHz automotive preset: 250 MHz over 40 µs, 5 MHz sampling, 10 of 32
    /// chirps, 2×4 sparse array over 12λ.
    ///
    /// The nominal resolution figures of this waveform (0.6 m, 4.8828 m/s,
    /// 78.125 m/s) assume `c = 3e8` m/s, so the preset uses that rounded speed.
    pub fn automotive_24ghz() -> Self {
        RadarConfig {
            carrier_frequency_hz: 24e9,
            chirp_rate_hz_per_s: 250e6 / 40e-6,
            chirp_duration_s: 40e-6,
            sampling_frequency_hz: 5e6,
            chirps_per_cpi_max: 32,
            chirps_transmitted: 10,
            tx_count: 2,
            rx_count: 4,
            tx_aperture_wavelengths: 6.0,
            rx_aperture_wavelengths: 6.0,
            propagation_speed_mps: 3e8,
        }
    }

    /// Same waveform with the full 4×8 ULA and every chirp slot used.
    pub fn full_measurement(&self) -> Self {
        RadarConfig {
            tx_count: 4,
            rx_count: 8,
            chirps_transmitted: self.chirps_per_cpi_max,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("carrier_frequency_hz", self.carrier_frequency_hz),
            ("chirp_rate_hz_per_s", self.chirp_rate_hz_per_s),
            ("chirp_duration_s", self.chirp_duration_s),
            ("sampling_frequency_hz", self.sampling_frequency_hz),
            ("tx_aperture_wavelengths", self.tx_aperture_wavelengths),
            ("rx_aperture_wavelengths", self.rx_aperture_wavelengths),
            ("propagation_speed_mps", self.propagation_speed_mps),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::invalid(name, format!("must be finite and > 0, got {v}")));
            }
        }
        for (name, v) in [
            ("chirps_per_cpi_max", self.chirps_per_cpi_max),
            ("chirps_transmitted", self.chirps_transmitted),
            ("tx_count", self.tx_count),
            ("rx_count", self.rx_count),
        ] {
            if v == 0 {
                return Err(Error::invalid(name, "must be >= 1"));
            }
        }
        if self.chirps_transmitted > self.chirps_per_cpi_max {
            return Err(Error::invalid(
                "chirps_transmitted",
                format!(
                    "P = {} exceeds P_max = {}",
                    self.chirps_transmitted, self.chirps_per_cpi_max
                ),
            ));
        }
        Ok(())
    }

    /// N = ⌈f_s·T_c⌉, tolerant to floating-point noise in the product.
    pub fn fast_time_samples(&self) -> usize {
        let x = self.sampling_frequency_hz * self.chirp_duration_s;
        let r = x.round();
        let n = if (x - r).abs() <= 1e-9 * x.max(1.0) {
            r
        } else {
            x.ceil()
        };
        (n as usize).max(1)
    }

    pub fn wavelength_m(&self) -> f64 {
        self.propagation_speed_mps / self.carrier_frequency_hz
    }

    /// Total aperture A in wavelengths.
    pub fn aperture_wavelengths(&self) -> f64 {
        self.tx_aperture_wavelengths + self.rx_aperture_wavelengths
    }

    pub fn aperture_m(&self) -> f64 {
        self.aperture_wavelengths() * self.wavelength_m()
    }

    pub fn bandwidth_hz(&self) -> f64 {
        self.chirp_rate_hz_per_s * self.chirp_duration_s
    }

    /// DFT range bin width c/(2γT_c).
    pub fn range_resolution_m(&self) -> f64 {
        self.propagation_speed_mps / (2.0 * self.bandwidth_hz())
    }

    /// Unambiguous velocity λ/(4T_c).
    pub fn max_velocity_mps(&self) -> f64 {
        self.wavelength_m() / (4.0 * self.chirp_duration_s)
    }

    /// Doppler resolution over the full CPI, λ/(2P_maxT_c).
    pub fn velocity_resolution_mps(&self) -> f64 {
        self.wavelength_m() / (2.0 * self.chirps_per_cpi_max as f64 * self.chirp_duration_s)
    }

    /// Spacing of the sin-angle grid at which element characteristic functions vanish, 2λ/A.
    pub fn sin_angle_spacing(&self) -> f64 {
        2.0 / self.aperture_wavelengths()
    }
}

/// Builds a validated config from a flat key-value map.
///
/// Keys: `carrier_frequency_hz`, `chirp_duration_s`, `sampling_frequency_hz`,
/// either `chirp_rate_hz_per_s` or `chirp_bandwidth_hz`, `chirps_per_cpi_max`,
/// `chirps_transmitted`, `tx_count`, `rx_count`, `tx_aperture_wavelengths`,
/// `rx_aperture_wavelengths`, and optionally `propagation_speed_mps`
/// (defaults to [`SPEED_OF_LIGHT`]).
pub fn build_config(raw: &BTreeMap<String, f64>) -> Result<RadarConfig> {
    let get = |k: &str| raw.get(k).copied().ok_or_else(|| Error::MissingKey(k.to_string()));
    let count = |k: &str| -> Result<usize> {
        let v = get(k)?;
        if !(v.is_finite() && v >= 0.0 && v.fract() == 0.0) {
            return Err(Error::invalid(k, format!("must be a non-negative integer, got {v}")));
        }
        Ok(v as usize)
    };
    let chirp_duration_s = get("chirp_duration_s")?;
    let chirp_rate_hz_per_s = match (raw.get("chirp_rate_hz_per_s"), raw.get("chirp_bandwidth_hz")) {
        (Some(&g), _) => g,
        (None, Some(&b)) => b / chirp_duration_s,
        (None, None) => return Err(Error::MissingKey("chirp_rate_hz_per_s".into())),
    };
    let cfg = RadarConfig {
        carrier_frequency_hz: get("carrier_frequency_hz")?,
        chirp_rate_hz_per_s,
        chirp_duration_s,
        sampling_frequency_hz: get("sampling_frequency_hz")?,
        chirps_per_cpi_max: count("chirps_per_cpi_max")?,
        chirps_transmitted: count("chirps_transmitted")?,
        tx_count: count("tx_count")?,
        rx_count: count("rx_count")?,
        tx_aperture_wavelengths: get("tx_aperture_wavelengths")?,
        rx_aperture_wavelengths: get("rx_aperture_wavelengths")?,
        propagation_speed_mps: raw.get("propagation_speed_mps").copied().unwrap_or(SPEED_OF_LIGHT),
    };
    cfg.validate()?;
    Ok(cfg)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ArrayKind {
    RandomSla,
    UlaReference,
    Transceiver,
}

/// Realized element positions, as fractions of the total aperture.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArrayGeometry {
    pub tx_positions: Vec<f64>,
    pub rx_positions: Vec<f64>,
    pub kind: ArrayKind,
}

impl ArrayGeometry {
    /// Virtual positions `α_n + β_m` in `(n, m)` lexicographic order.
    pub fn virtual_positions(&self) -> Vec<f64> {
        self.tx_positions
            .iter()
            .flat_map(|a| self.rx_positions.iter().map(move |b| a + b))
            .collect()
    }

    pub fn virtual_count(&self) -> usize {
        self.tx_positions.len() * self.rx_positions.len()
    }
}

/// Draws `N_T` transmitters from U[−A_T/A, A_T/A] and `N_R` receivers from U[−A_R/A, A_R/A].
pub fn sample_sla(config: &RadarConfig, seed: u64) -> ArrayGeometry {
    let a = config.aperture_wavelengths();
    let (wt, wr) = (config.tx_aperture_wavelengths / a, config.rx_aperture_wavelengths / a);
    let mut r = rng::stream(seed, "array", 0);
    let tx_positions = (0..config.tx_count).map(|_| r.random_range(-wt..=wt)).collect();
    let rx_positions = (0..config.rx_count).map(|_| r.random_range(-wr..=wr)).collect();
    ArrayGeometry {
        tx_positions,
        rx_positions,
        kind: ArrayKind::RandomSla,
    }
}

/// Co-located transceivers: `α_n = β_n`, drawn from U[−A_T/A, A_T/A].
pub fn sample_transceiver(config: &RadarConfig, seed: u64) -> Result<ArrayGeometry> {
    if config.tx_count != config.rx_count {
        return Err(Error::Unsupported(format!(
            "transceiver array needs N_T = N_R, got {} and {}",
            config.tx_count, config.rx_count
        )));
    }
    let w = config.tx_aperture_wavelengths / config.aperture_wavelengths();
    let mut r = rng::stream(seed, "array", 0);
    let pos: Vec<f64> = (0..config.tx_count).map(|_| r.random_range(-w..=w)).collect();
    Ok(ArrayGeometry {
        tx_positions: pos.clone(),
        rx_positions: pos,
        kind: ArrayKind::Transceiver,
    })
}

/// Reference 4×8 uniform layout: transmitters in pairs λ apart at both ends of the
/// aperture, receivers λ/2 apart between them. The virtual array is 20 unique
/// positions at λ/2 spacing.
pub fn build_ula_geometry(config: &RadarConfig) -> Result<ArrayGeometry> {
    if config.tx_count != 4 || config.rx_count != 8 {
        return Err(Error::Unsupported(format!(
            "reference ULA is defined for N_T = 4, N_R = 8, got {}×{}",
            config.tx_count, config.rx_count
        )));
    }
    let a = config.aperture_wavelengths();
    // Positions in wavelengths, centred on the array.
    let tx_wl = [-3.0, -2.0, 2.0, 3.0];
    let rx_wl: Vec<f64> = (0..8).map(|k| -1.75 + 0.5 * k as f64).collect();
    let half_t = config.tx_aperture_wavelengths / 2.0;
    let half_r = config.rx_aperture_wavelengths / 2.0;
    if tx_wl.iter().any(|x: &f64| x.abs() > half_t + 1e-12) || rx_wl.iter().any(|x| x.abs() > half_r + 1e-12) {
        return Err(Error::Unsupported("reference ULA needs A_T ≥ 6λ and A_R ≥ 3.5λ".into()));
    }
    Ok(ArrayGeometry {
        tx_positions: tx_wl.iter().map(|x| 2.0 * x / a).collect(),
        rx_positions: rx_wl.iter().map(|x| 2.0 * x / a).collect(),
        kind: ArrayKind::UlaReference,
    })
}

/// Transmitted chirp slots within the CPI.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChirpSchedule {
    pub indices: Vec<usize>,
    pub p_max: usize,
}

impl ChirpSchedule {
    pub fn full(p_max: usize) -> Self {
        ChirpSchedule {
            indices: (0..p_max).collect(),
            p_max,
        }
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn is_full(&self) -> bool {
        let mut v = self.indices.clone();
        v.sort_unstable();
        v.len() == self.p_max && v.iter().enumerate().all(|(i, &z)| i == z)
    }
}

/// Uniform draw of `p` distinct slots from `0..p_max` (partial Fisher–Yates).
pub fn sample_chirp_schedule(p: usize, p_max: usize, seed: u64) -> Result<ChirpSchedule> {
    if p > p_max {
        return Err(Error::invalid(
            "chirps_transmitted",
            format!("P = {p} exceeds P_max = {p_max}"),
        ));
    }
    let mut r = rng::stream(seed, "chirps", 0);
    let mut pool: Vec<usize> = (0..p_max).collect();
    for i in 0..p {
        let j = r.random_range(i..p_max);
        pool.swap(i, j);
    }
    pool.truncate(p);
    Ok(ChirpSchedule { indices: pool, p_max })
}

/// Dictionary grids for range (m), velocity (m/s) and angle (rad).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParamGrids {
    pub range_grid_m: Vec<f64>,
    pub doppler_grid_mps: Vec<f64>,
    pub angle_grid_rad: Vec<f64>,
    pub angle_grid_is_uniform_in_sin: bool,
}

/// Uniform range grid `min, min + step, …` up to `max`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RangeGridSpec {
    pub min_m: f64,
    pub max_m: f64,
    pub step_m: f64,
}

impl Default for RangeGridSpec {
    fn default() -> Self {
        RangeGridSpec {
            min_m: 1.2,
            max_m: 120.0,
            step_m: 0.12,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GridRequest {
    /// Doppler step λ/(2P_maxT_c) and sin-angle step 2λ/A over the given intervals.
    Guarantee {
        velocity_mps: (f64, f64),
        sin_angle: (f64, f64),
        range: RangeGridSpec,
    },
    /// Uniform Doppler points and sin-uniform angle points.
    Experiment {
        velocity_points: usize,
        velocity_limit_mps: f64,
        angle_points: usize,
        angle_limit_deg: f64,
        range: RangeGridSpec,
    },
}

impl GridRequest {
    /// Guarantee spacings over the whole unambiguous velocity and angle interval.
    pub fn guarantee_full(config: &RadarConfig) -> Self {
        let v = config.max_velocity_mps();
        GridRequest::Guarantee {
            velocity_mps: (-v, v),
            sin_angle: (-1.0, 1.0),
            range: RangeGridSpec::default(),
        }
    }

    /// 200 Doppler points on ±78 m/s and 50 angle points over ±30°.
    pub fn experiment_default() -> Self {
        GridRequest::Experiment {
            velocity_points: 200,
            velocity_limit_mps: 78.0,
            angle_points: 50,
            angle_limit_deg: 30.0,
            range: RangeGridSpec::default(),
        }
    }
}

fn stepped(lo: f64, hi: f64, step: f64, name: &str) -> Result<Vec<f64>> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::invalid(name, format!("spacing must be positive, got {step}")));
    }
    if !(lo <= hi) {
        return Err(Error::invalid(name, format!("empty interval [{lo}, {hi}]")));
    }
    if hi > lo && hi - lo < step * (1.0 - 1e-9) {
        return Err(Error::invalid(
            name,
            format!("spacing {step} is larger than the interval [{lo}, {hi}]"),
        ));
    }
    let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|k| lo + k as f64 * step).collect())
}

fn linspace(lo: f64, hi: f64, n: usize, name: &str) -> Result<Vec<f64>> {
    match n {
        0 => Err(Error::invalid(name, "needs at least one point")),
        1 => Ok(vec![0.5 * (lo + hi)]),
        _ => {
            if !(lo < hi) {
                return Err(Error::invalid(name, format!("empty interval [{lo}, {hi}]")));
            }
            let d = (hi - lo) / (n - 1) as f64;
            Ok((0..n)
                .map(|k| if k == n - 1 { hi } else { lo + k as f64 * d })
                .collect())
        }
    }
}

pub fn build_grids(config: &RadarConfig, request: &GridRequest) -> Result<ParamGrids> {
    let (range, doppler, angle) = match request {
        GridRequest::Guarantee {
            velocity_mps,
            sin_angle,
            range,
        } => {
            let dop = stepped(
                velocity_mps.0,
                velocity_mps.1,
                config.velocity_resolution_mps(),
                "velocity_mps",
            )?;
            let sins = stepped(sin_angle.0, sin_angle.1, config.sin_angle_spacing(), "sin_angle")?;
            (
                range,
                dop,
                sins.into_iter().map(|s| s.clamp(-1.0, 1.0).asin()).collect(),
            )
        }
        GridRequest::Experiment {
            velocity_points,
            velocity_limit_mps,
            angle_points,
            angle_limit_deg,
            range,
        } => {
            let dop = linspace(
                -velocity_limit_mps,
                *velocity_limit_mps,
                *velocity_points,
                "velocity_points",
            )?;
            let s = angle_limit_deg.to_radians().sin();
            let sins = linspace(-s, s, *angle_points, "angle_points")?;
            (range, dop, sins.into_iter().map(f64::asin).collect())
        }
    };
    let grids = ParamGrids {
        range_grid_m: stepped(range.min_m, range.max_m, range.step_m, "range")?,
        doppler_grid_mps: doppler,
        angle_grid_rad: angle,
        angle_grid_is_uniform_in_sin: true,
    };
    grids.validate(config)?;
    Ok(grids)
}

impl ParamGrids {
    /// Checks ordering and physical limits. Angles may reach ±π/2 so that the
    /// full-interval guarantee grid (which includes sin φ = ±1) is representable.
    pub fn validate(&self, config: &RadarConfig) -> Result<()> {
        for (name, g) in [
            ("range_grid_m", &self.range_grid_m),
            ("doppler_grid_mps", &self.doppler_grid_mps),
            ("angle_grid_rad", &self.angle_grid_rad),
        ] {
            if g.is_empty() {
                return Err(Error::invalid(name, "grid is empty"));
            }
            if g.windows(2).any(|w| !(w[1] > w[0])) {
                return Err(Error::invalid(name, "grid must be strictly increasing"));
            }
        }
        let vmax = config.max_velocity_mps() * (1.0 + 1e-9);
        if self.doppler_grid_mps.iter().any(|v| v.abs() > vmax) {
            return Err(Error::invalid(
                "doppler_grid_mps",
                format!("values exceed v_max = {vmax}"),
            ));
        }
        if self.angle_grid_rad.iter().any(|a| a.abs() > PI / 2.0 + 1e-12) {
            return Err(Error::invalid("angle_grid_rad", "values outside [−π/2, π/2]"));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Target {
    pub range_m: f64,
    pub velocity_mps: f64,
    pub aoa_rad: f64,
    pub gain: Complex64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TargetScene {
    pub targets: Vec<Target>,
}

/// Parameter box for random scenes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneBounds {
    pub range_m: (f64, f64),
    pub velocity_mps: (f64, f64),
    pub aoa_rad: (f64, f64),
}

impl Default for SceneBounds {
    fn default() -> Self {
        SceneBounds {
            range_m: (20.0, 120.0),
            velocity_mps: (-78.0, 78.0),
            aoa_rad: (-20f64.to_radians(), 20f64.to_radians()),
        }
    }
}

fn uniform(r: &mut impl Rng, (lo, hi): (f64, f64)) -> f64 {
    if lo == hi {
        lo
    } else {
        r.random_range(lo..hi)
    }
}

/// `k` targets uniform in the box with unit-modulus gains `exp(jψ)`, ψ ~ U[0, 2π).
pub fn sample_scene(k: usize, bounds: &SceneBounds, seed: u64) -> Result<TargetScene> {
    if k == 0 {
        return Err(Error::invalid("targets", "K must be >= 1"));
    }
    for (name, (lo, hi)) in [
        ("range_m", bounds.range_m),
        ("velocity_mps", bounds.velocity_mps),
        ("aoa_rad", bounds.aoa_rad),
    ] {
        if !(lo <= hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::invalid(name, format!("empty box [{lo}, {hi}]")));
        }
    }
    if bounds.range_m.0 <= 0.0 {
        return Err(Error::invalid("range_m", "ranges must be positive"));
    }
    if bounds.aoa_rad.0 <= -PI / 2.0 || bounds.aoa_rad.1 >= PI / 2.0 {
        return Err(Error::invalid("aoa_rad", "angles must lie inside (−π/2, π/2)"));
    }
    let mut r = rng::stream(seed, "scene", 0);
    let targets = (0..k)
        .map(|_| {
            let range_m = uniform(&mut r, bounds.range_m);
            let velocity_mps = uniform(&mut r, bounds.velocity_mps);
            let aoa_rad = uniform(&mut r, bounds.aoa_rad);
            let psi = r.random_range(0.0..2.0 * PI);
            Target {
                range_m,
                velocity_mps,
                aoa_rad,
                gain: Complex64::from_polar(1.0, psi),
            }
        })
        .collect();
    Ok(TargetScene { targets })
}

/// `k` targets placed exactly on DFT range-bin centres and on Doppler/angle grid
/// points, with distinct range bins. Bins are drawn from those whose centre lies
/// in `range_m`.
pub fn sample_grid_scene(
    k: usize,
    config: &RadarConfig,
    grids: &ParamGrids,
    range_m: (f64, f64),
    seed: u64,
) -> Result<TargetScene> {
    let dr = config.range_resolution_m();
    let lo = (range_m.0 / dr).ceil() as usize;
    let hi = ((range_m.1 / dr).floor() as usize).min(config.fast_time_samples() - 1);
    if hi < lo || hi - lo + 1 < k {
        return Err(Error::invalid("range_m", "not enough range bins for distinct targets"));
    }
    let mut r = rng::stream(seed, "grid-scene", 0);
    let mut bins: Vec<usize> = (lo..=hi).collect();
    for i in 0..k {
        let j = r.random_range(i..bins.len());
        bins.swap(i, j);
    }
    let targets = bins[..k]
        .iter()
        .map(|&l| Target {
            range_m: l as f64 * dr,
            velocity_mps: grids.doppler_grid_mps[r.random_range(0..grids.doppler_grid_mps.len())],
            aoa_rad: grids.angle_grid_rad[r.random_range(0..grids.angle_grid_rad.len())],
            gain: Complex64::from_polar(1.0, r.random_range(0.0..2.0 * PI)),
        })
        .collect();
    Ok(TargetScene { targets })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table_map() -> BTreeMap<String, f64> {
        [
            ("carrier_frequency_hz", 24e9),
            ("chirp_bandwidth_hz", 250e6),
            ("chirp_duration_s", 40e-6),
            ("sampling_frequency_hz", 5e6),
            ("chirps_per_cpi_max", 32.0),
            ("chirps_transmitted", 10.0),
            ("tx_count", 2.0),
            ("rx_count", 4.0),
            ("tx_aperture_wavelengths", 6.0),
            ("rx_aperture_wavelengths", 6.0),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect()
    }

    #[test]
    fn build_config_derives_quantities() {
        let cfg = build_config(&table_map()).unwrap();
        assert_eq!(cfg.fast_time_samples(), 200);
        assert!((cfg.wavelength_m() - 0.012491).abs() < 5e-7);
        assert!((cfg.chirp_rate_hz_per_s - 6.25e12).abs() < 1.0);
        assert_eq!(cfg.aperture_wavelengths(), 12.0);
    }

    #[test]
    fn build_config_rejects_bad_input() {
        let mut m = table_map();
        m.remove("tx_count");
        assert!(matches!(build_config(&m), Err(Error::MissingKey(k)) if k == "tx_count"));
        let mut m = table_map();
        m.insert("chirps_transmitted".into(), 33.0);
        assert!(build_config(&m).is_err());
        let mut m = table_map();
        m.insert("carrier_frequency_hz".into(), -1.0);
        assert!(build_config(&m).is_err());
    }

    #[test]
    fn ula_has_twenty_half_wavelength_virtual_positions() {
        let cfg = RadarConfig::automotive_24ghz().full_measurement();
        let g = build_ula_geometry(&cfg).unwrap();
        let a = cfg.aperture_wavelengths();
        let mut v: Vec<f64> = g.virtual_positions().iter().map(|x| x * a / 2.0).collect();
        v.sort_by(f64::total_cmp);
        v.dedup_by(|x, y| (*x - *y).abs() < 1e-9);
        assert_eq!(v.len(), 20);
        assert!(v.windows(2).all(|w| (w[1] - w[0] - 0.5).abs() < 1e-12));
        assert!(build_ula_geometry(&RadarConfig::automotive_24ghz()).is_err());
    }

    #[test]
    fn guarantee_grids_have_expected_sizes() {
        let cfg = RadarConfig::automotive_24ghz();
        let g = build_grids(&cfg, &GridRequest::guarantee_full(&cfg)).unwrap();
        assert_eq!(g.doppler_grid_mps.len(), 33);
        assert_eq!(g.angle_grid_rad.len(), 13);
        assert!((g.doppler_grid_mps[1] - g.doppler_grid_mps[0] - 4.8828125).abs() < 1e-9);
        let e = build_grids(&cfg, &GridRequest::experiment_default()).unwrap();
        assert_eq!(
            (e.range_grid_m.len(), e.doppler_grid_mps.len(), e.angle_grid_rad.len()),
            (991, 200, 50)
        );
        assert!((e.range_grid_m[990] - 120.0).abs() < 1e-9);
    }

    #[test]
    fn oversized_spacing_is_rejected() {
        let cfg = RadarConfig::automotive_24ghz();
        let req = GridRequest::Guarantee {
            velocity_mps: (0.0, 1.0),
            sin_angle: (0.0, 0.0),
            range: RangeGridSpec::default(),
        };
        assert!(build_grids(&cfg, &req).is_err());
    }

    #[test]
    fn chirp_schedule_is_distinct_and_deterministic() {
        let a = sample_chirp_schedule(10, 32, 9).unwrap();
        assert_eq!(a, sample_chirp_schedule(10, 32, 9).unwrap());
        let mut s = a.indices.clone();
        s.sort_unstable();
        s.dedup();
        assert_eq!(s.len(), 10);
        assert!(s.iter().all(|&z| z < 32));
        assert!(sample_chirp_schedule(32, 32, 1).unwrap().is_full());
        assert!(sample_chirp_schedule(33, 32, 1).is_err());
    }

    #[test]
    fn point_box_gives_exact_target() {
        let b = SceneBounds {
            range_m: (50.0, 50.0),
            velocity_mps: (3.0, 3.0),
            aoa_rad: (0.1, 0.1),
        };
        let s = sample_scene(1, &b, 4).unwrap();
        let t = s.targets[0];
        assert_eq!((t.range_m, t.velocity_mps, t.aoa_rad), (50.0, 3.0, 0.1));
        assert!((t.gain.norm() - 1.0).abs() < 1e-15);
        let empty = SceneBounds {
            range_m: (60.0, 50.0),
            ..b
        };
        assert!(sample_scene(1, &empty, 4).is_err());
    }
}
