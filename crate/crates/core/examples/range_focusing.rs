//! Range stage on a noisy cube: fast-time DFT, per-row peak picking, binary
//! integration, and Range-OMP refinement on a finer grid.

use csfmcw::bench::Acquisition;
use csfmcw::range::{binary_integrate, detect_bins, range_dft, range_omp, DetectionThreshold, RangeOmpParams};
use csfmcw::scene::{RadarConfig, Target, TargetScene};
use csfmcw::synth::{synthesize_approx, NoiseSpec};
use csfmcw::Complex64;

fn main() -> csfmcw::Result<()> {
    let config = RadarConfig::automotive_24ghz();
    let acq = Acquisition::sparse(&config, 5)?;
    let scene = TargetScene {
        targets: [30.0, 30.9, 64.25]
            .iter()
            .map(|&r| Target {
                range_m: r,
                velocity_mps: 0.0,
                aoa_rad: 0.0,
                gain: Complex64::new(1.0, 0.0),
            })
            .collect(),
    };
    let cube = synthesize_approx(
        &scene,
        &acq.geometry,
        &acq.schedule,
        &config,
        &NoiseSpec::from_snr_db(25.0),
        5,
    )?;
    let spectrum = range_dft(&cube);
    let per_row: Vec<Vec<usize>> = (0..spectrum.rows())
        .map(|r| detect_bins(spectrum.row(r), DetectionThreshold::Relative(0.3)))
        .collect();
    let det = binary_integrate(&per_row, spectrum.bins(), 0.5, &config)?;
    println!("DFT bins {:?}", det.detected_bins);
    println!("DFT ranges {:?}", det.estimated_ranges_m);

    let grid: Vec<f64> = (0..=400).map(|k| 20.0 + 0.15 * k as f64).collect();
    let fine = range_omp(cube.row(0), &grid, &config, &RangeOmpParams::default())?;
    for e in fine {
        println!("Range-OMP {:.2} m  |a| {:.2}", e.range_m, e.coefficient.norm());
    }
    Ok(())
}
