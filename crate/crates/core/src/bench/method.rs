use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::range::{DetectionThreshold, RangeOmpParams};
use crate::solvers::{BpParams, LassoParams, OmpParams};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MethodName {
    OmpBinary,
    OmpRangeomp,
    TwodOmp,
    Bp,
    Lasso,
    ClassicalDft,
}

impl MethodName {
    pub const ALL: [MethodName; 6] = [
        MethodName::OmpBinary,
        MethodName::OmpRangeomp,
        MethodName::TwodOmp,
        MethodName::Bp,
        MethodName::Lasso,
        MethodName::ClassicalDft,
    ];

    /// Methods operating on the sparse array and sparse chirps.
    pub const SPARSE: [MethodName; 5] = [
        MethodName::OmpBinary,
        MethodName::OmpRangeomp,
        MethodName::TwodOmp,
        MethodName::Bp,
        MethodName::Lasso,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            MethodName::OmpBinary => "omp-binary",
            MethodName::OmpRangeomp => "omp-rangeomp",
            MethodName::TwodOmp => "twod-omp",
            MethodName::Bp => "bp",
            MethodName::Lasso => "lasso",
            MethodName::ClassicalDft => "classical-dft",
        }
    }
}

impl fmt::Display for MethodName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MethodName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        MethodName::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::invalid("method", format!("unknown method `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum RangeStage {
    /// Per-row peak detection on the range DFT, then majority voting.
    DftBinary {
        threshold: DetectionThreshold,
        fraction: f64,
    },
    /// OMP on the first fast-time row over the fine range grid. With
    /// `binary_fraction` set, every row is processed and the bins voted on.
    RangeOmp {
        params: RangeOmpParams,
        binary_fraction: Option<f64>,
    },
    /// Detection on the range profile coherently focused by the full-array 2D DFT.
    DftCoherent { threshold: DetectionThreshold },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum DopplerAngleStage {
    Omp1d {
        params: OmpParams,
    },
    Omp2d {
        params: OmpParams,
    },
    /// `epsilon` defaults to `σ·√(MP + 2√(MP))`, about two standard deviations
    /// above the expected noise norm over `M` channels and `P` chirps.
    Bp {
        params: BpParams,
        epsilon: Option<f64>,
    },
    Lasso {
        params: LassoParams,
    },
    /// 2D DFT over the uniform virtual array and the full chirp set.
    Dft2d,
}

/// A range stage paired with a Doppler-angle stage, and the support threshold:
/// recovered Doppler-angle candidates are kept at or above this fraction of the
/// strongest candidate in the CPI.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MethodSpec {
    pub name: MethodName,
    pub range_stage: RangeStage,
    pub doppler_angle_stage: DopplerAngleStage,
    pub support_threshold: f64,
}

impl MethodSpec {
    /// Default stage pairing for a method.
    pub fn standard(name: MethodName) -> Self {
        let binary = RangeStage::DftBinary {
            threshold: DetectionThreshold::Relative(0.3),
            fraction: 1.0 / 3.0,
        };
        let omp = OmpParams::default();
        let (range_stage, doppler_angle_stage) = match name {
            MethodName::OmpBinary => (binary, DopplerAngleStage::Omp1d { params: omp }),
            MethodName::OmpRangeomp => (
                RangeStage::RangeOmp {
                    params: RangeOmpParams::default(),
                    binary_fraction: None,
                },
                DopplerAngleStage::Omp1d { params: omp },
            ),
            MethodName::TwodOmp => (binary, DopplerAngleStage::Omp2d { params: omp }),
            MethodName::Bp => (
                binary,
                DopplerAngleStage::Bp {
                    params: BpParams::default(),
                    epsilon: None,
                },
            ),
            MethodName::Lasso => (
                binary,
                DopplerAngleStage::Lasso {
                    params: LassoParams::default(),
                },
            ),
            MethodName::ClassicalDft => (
                RangeStage::DftCoherent {
                    threshold: DetectionThreshold::Relative(0.3),
                },
                DopplerAngleStage::Dft2d,
            ),
        };
        MethodSpec {
            name,
            range_stage,
            doppler_angle_stage,
            support_threshold: if name == MethodName::ClassicalDft { 0.5 } else { 0.1 },
        }
    }

    pub fn is_full_measurement(&self) -> bool {
        self.name == MethodName::ClassicalDft
    }

    /// Rejects stage combinations that do not belong together.
    pub fn validate(&self) -> Result<()> {
        let coherent = matches!(self.range_stage, RangeStage::DftCoherent { .. });
        let dft2d = matches!(self.doppler_angle_stage, DopplerAngleStage::Dft2d);
        if coherent != dft2d || dft2d != self.is_full_measurement() {
            return Err(Error::invalid(
                "method",
                format!(
                    "{}: coherent range integration pairs only with the 2D DFT stage",
                    self.name
                ),
            ));
        }
        let expected = MethodSpec::standard(self.name);
        if std::mem::discriminant(&expected.range_stage) != std::mem::discriminant(&self.range_stage)
            || std::mem::discriminant(&expected.doppler_angle_stage)
                != std::mem::discriminant(&self.doppler_angle_stage)
        {
            return Err(Error::invalid(
                "method",
                format!("{}: stages do not match the method", self.name),
            ));
        }
        if !(self.support_threshold >= 0.0 && self.support_threshold <= 1.0) {
            return Err(Error::invalid("support_threshold", "must lie in [0, 1]"));
        }
        match &self.range_stage {
            RangeStage::DftBinary { fraction, threshold } => {
                check_threshold(threshold)?;
                if !(*fraction > 0.0 && *fraction <= 1.0) {
                    return Err(Error::invalid("fraction", "must lie in (0, 1]"));
                }
            }
            RangeStage::DftCoherent { threshold } => check_threshold(threshold)?,
            RangeStage::RangeOmp {
                params,
                binary_fraction,
            } => {
                if params.omp.k_max < 1 {
                    return Err(Error::invalid("k_max", "must be >= 1"));
                }
                if let Some(f) = binary_fraction {
                    if !(*f > 0.0 && *f <= 1.0) {
                        return Err(Error::invalid("binary_fraction", "must lie in (0, 1]"));
                    }
                }
            }
        }
        Ok(())
    }
}

fn check_threshold(t: &DetectionThreshold) -> Result<()> {
    match *t {
        DetectionThreshold::Relative(f) if f > 0.0 && f <= 1.0 => Ok(()),
        DetectionThreshold::Absolute(a) if a >= 0.0 => Ok(()),
        _ => Err(Error::invalid("threshold", format!("{t:?} out of range"))),
    }
}
