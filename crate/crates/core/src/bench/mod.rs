//! End-to-end estimation methods, the classical full-array baseline, hit and
//! false-alarm scoring, Monte Carlo experiments and CSV output.

mod baseline;
mod csv_out;
mod experiment;
mod method;
mod metrics;
mod pipeline;

pub use baseline::classical_dft_baseline;
pub use csv_out::{emit_csv, read_csv, write_csv, CsvRow, CSV_HEADER};
pub use experiment::{
    calibrate_support_threshold, calibration_sweep, monte_carlo, roc_area, roc_sweep, run_trial, ExperimentConfig,
    RocPoint, SceneSpec, SignalModel, ThresholdCalibration, TrialRecord,
};
pub use method::{DopplerAngleStage, MethodName, MethodSpec, RangeStage};
pub use metrics::{aggregate, classify, AggregateReport, HitError, Resolutions, TrialMetrics};
pub use pipeline::{finalize_estimates, run_pipeline, Acquisition, BinResult, Candidate, Estimate, PipelineOutput};
