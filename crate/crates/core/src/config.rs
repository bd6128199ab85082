//! JSON experiment documents.
//!
//! A document has the sections `waveform`, `array`, `chirps`, `grids`, `scene`,
//! `seed`, `experiment` and `guarantees`. Every section is optional and defaults to the 24 GHz
//! automotive preset; unknown keys are rejected. All values are SI (Hz, s, m,
//! m/s, rad) except where a field name says otherwise.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::bench::{ExperimentConfig, MethodName, MethodSpec, Resolutions, SceneSpec, SignalModel};
use crate::error::{Error, Result};
use crate::guarantees::ReportRequest;
use crate::scene::{build_config, ArrayKind, GridRequest, RadarConfig, SceneBounds, Target, TargetScene};
use crate::synth::CalibrationSpec;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WaveformSection {
    pub carrier_frequency_hz: f64,
    pub chirp_bandwidth_hz: f64,
    pub chirp_duration_s: f64,
    pub sampling_frequency_hz: f64,
    pub propagation_speed_mps: f64,
}

impl Default for WaveformSection {
    fn default() -> Self {
        let c = RadarConfig::automotive_24ghz();
        WaveformSection {
            carrier_frequency_hz: c.carrier_frequency_hz,
            chirp_bandwidth_hz: c.bandwidth_hz(),
            chirp_duration_s: c.chirp_duration_s,
            sampling_frequency_hz: c.sampling_frequency_hz,
            propagation_speed_mps: c.propagation_speed_mps,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ArraySection {
    pub kind: ArrayKind,
    pub tx_count: usize,
    pub rx_count: usize,
    pub tx_aperture_wavelengths: f64,
    pub rx_aperture_wavelengths: f64,
}

impl Default for ArraySection {
    fn default() -> Self {
        ArraySection {
            kind: ArrayKind::RandomSla,
            tx_count: 2,
            rx_count: 4,
            tx_aperture_wavelengths: 6.0,
            rx_aperture_wavelengths: 6.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ChirpSection {
    pub transmitted: usize,
    pub per_cpi_max: usize,
}

impl Default for ChirpSection {
    fn default() -> Self {
        ChirpSection {
            transmitted: 10,
            per_cpi_max: 32,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SceneSection {
    /// Number of random targets per trial.
    pub targets: usize,
    pub bounds: SceneBounds,
    pub on_grid: bool,
    /// Fixed targets for `synth`; overrides random draws when present.
    pub explicit: Option<Vec<Target>>,
}

impl Default for SceneSection {
    fn default() -> Self {
        let s = SceneSpec::default();
        SceneSection {
            targets: s.targets,
            bounds: s.bounds,
            on_grid: s.on_grid,
            explicit: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentSection {
    pub method: MethodName,
    pub model: SignalModel,
    /// Omit or set to `null` for noiseless data.
    pub snr_db: Option<f64>,
    pub calibration: CalibrationSpec,
    /// Overrides the method's default support threshold (fraction of the strongest candidate in the CPI).
    pub support_threshold: Option<f64>,
    /// Full method override; takes precedence over `method` and `support_threshold`.
    pub method_spec: Option<MethodSpec>,
    pub resolutions: Option<Resolutions>,
    pub runs: usize,
}

impl Default for ExperimentSection {
    fn default() -> Self {
        ExperimentSection {
            method: MethodName::OmpBinary,
            model: SignalModel::Exact,
            snr_db: Some(30.0),
            calibration: CalibrationSpec::none(),
            support_threshold: None,
            method_spec: None,
            resolutions: None,
            runs: 300,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConfigDocument {
    pub waveform: WaveformSection,
    pub array: ArraySection,
    pub chirps: ChirpSection,
    pub grids: GridRequest,
    pub scene: SceneSection,
    pub seed: u64,
    pub experiment: ExperimentSection,
    pub guarantees: ReportRequest,
}

impl Default for ConfigDocument {
    fn default() -> Self {
        ConfigDocument {
            waveform: WaveformSection::default(),
            array: ArraySection::default(),
            chirps: ChirpSection::default(),
            grids: GridRequest::experiment_default(),
            scene: SceneSection::default(),
            seed: 0,
            experiment: ExperimentSection::default(),
            guarantees: ReportRequest::default(),
        }
    }
}

impl ConfigDocument {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serialises")
    }

    /// Validated radar config.
    pub fn radar_config(&self) -> Result<RadarConfig> {
        let w = &self.waveform;
        let a = &self.array;
        let raw: BTreeMap<String, f64> = [
            ("carrier_frequency_hz", w.carrier_frequency_hz),
            ("chirp_bandwidth_hz", w.chirp_bandwidth_hz),
            ("chirp_duration_s", w.chirp_duration_s),
            ("sampling_frequency_hz", w.sampling_frequency_hz),
            ("propagation_speed_mps", w.propagation_speed_mps),
            ("tx_count", a.tx_count as f64),
            ("rx_count", a.rx_count as f64),
            ("tx_aperture_wavelengths", a.tx_aperture_wavelengths),
            ("rx_aperture_wavelengths", a.rx_aperture_wavelengths),
            ("chirps_transmitted", self.chirps.transmitted as f64),
            ("chirps_per_cpi_max", self.chirps.per_cpi_max as f64),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect();
        build_config(&raw)
    }

    pub fn method_spec(&self) -> MethodSpec {
        let e = &self.experiment;
        if let Some(m) = &e.method_spec {
            return m.clone();
        }
        let mut m = MethodSpec::standard(e.method);
        if let Some(t) = e.support_threshold {
            m.support_threshold = t;
        }
        m
    }

    pub fn experiment_config(&self) -> Result<ExperimentConfig> {
        let e = &self.experiment;
        if let Some(s) = e.snr_db {
            if !s.is_finite() {
                return Err(Error::invalid("experiment.snr_db", "must be finite or null"));
            }
        }
        let c = &e.calibration;
        if !(c.sigma_theta_rad >= 0.0 && c.sigma_r_m >= 0.0) {
            return Err(Error::invalid(
                "experiment.calibration",
                "error scales must be non-negative",
            ));
        }
        let exp = ExperimentConfig {
            radar: self.radar_config()?,
            array: self.array.kind,
            grids: self.grids.clone(),
            scene: SceneSpec {
                targets: self.scene.targets,
                bounds: self.scene.bounds,
                on_grid: self.scene.on_grid,
            },
            model: e.model,
            snr_db: e.snr_db,
            calibration: e.calibration,
            method: self.method_spec(),
            resolutions: e.resolutions,
        };
        exp.validate()?;
        Ok(exp)
    }

    pub fn explicit_scene(&self) -> Option<TargetScene> {
        self.scene.explicit.clone().map(|targets| TargetScene { targets })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_document_is_the_preset() {
        let d = ConfigDocument::from_json("{}").unwrap();
        let c = d.radar_config().unwrap();
        let p = RadarConfig::automotive_24ghz();
        assert_eq!(c.fast_time_samples(), 200);
        assert!((c.chirp_rate_hz_per_s - p.chirp_rate_hz_per_s).abs() < 1.0);
        assert_eq!(c.propagation_speed_mps, 3e8);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(ConfigDocument::from_json(r#"{"waveform": {"carrier": 1}}"#).is_err());
    }

    #[test]
    fn roundtrips_through_json() {
        let d = ConfigDocument::default();
        assert_eq!(ConfigDocument::from_json(&d.to_json()).unwrap(), d);
    }
}
