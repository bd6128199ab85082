//! Compressive-sensing estimation of range, velocity and angle of arrival for
//! MIMO-FMCW radar operating with a sparse virtual array and a random subset of
//! chirps.
//!
//! The crate is organised as a pipeline:
//!
//! * [`scene`]: radar configuration, array geometry, chirp schedules, grids and targets.
//! * [`synth`]: IF data cube synthesis (exact and separable models) with noise and
//!   calibration errors, plus a binary cube dump format.
//! * [`range`]: fast-time DFT, peak detection, binary and coherent integration, Range-OMP.
//! * [`solvers`]: Doppler/angle dictionaries and sparse solvers (OMP, 2D-OMP, BP, LASSO).
//! * [`guarantees`]: coherence, isotropy and the measurement bounds for recovery.
//! * [`bench`]: end-to-end methods, the classical DFT baseline, Monte Carlo metrics and CSV.
//!
//! Everything is deterministic given a single `u64` seed.

pub mod bench;
pub mod config;
pub mod error;
pub mod guarantees;
pub mod linalg;
pub mod range;
pub mod rng;
pub mod scene;
pub mod solvers;
pub mod synth;

pub use error::{Error, Result};
pub use num_complex::Complex64;
