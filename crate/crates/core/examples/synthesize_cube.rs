//! Synthesises one IF cube for a fixed three-target scene, writes it to disk
//! and reads it back.

use csfmcw::bench::Acquisition;
use csfmcw::scene::{RadarConfig, Target, TargetScene};
use csfmcw::synth::{synthesize_exact, CalibrationSpec, IfCube, NoiseSpec};
use csfmcw::Complex64;

fn main() -> csfmcw::Result<()> {
    let config = RadarConfig::automotive_24ghz();
    let acq = Acquisition::sparse(&config, 11)?;
    let one = Complex64::new(1.0, 0.0);
    let scene = TargetScene {
        targets: vec![
            Target {
                range_m: 20.0,
                velocity_mps: -12.0,
                aoa_rad: (-10f64).to_radians(),
                gain: one,
            },
            Target {
                range_m: 45.5,
                velocity_mps: 3.0,
                aoa_rad: 0.0,
                gain: one,
            },
            Target {
                range_m: 80.2,
                velocity_mps: 25.0,
                aoa_rad: 15f64.to_radians(),
                gain: one,
            },
        ],
    };
    let cube = synthesize_exact(
        &scene,
        &acq.geometry,
        &acq.schedule,
        &config,
        &NoiseSpec::from_snr_db(20.0),
        &CalibrationSpec::none(),
        11,
    )?;
    let d = cube.dims();
    println!("chirp slots {:?}", acq.schedule.indices);
    println!("virtual positions {:?}", acq.geometry.virtual_positions());
    println!(
        "cube {} tx x {} rx x {} chirps x {} samples",
        d.tx, d.rx, d.chirps, d.samples
    );

    let path = std::env::temp_dir().join("csfmcw-example-cube.bin");
    cube.write_to(std::fs::File::create(&path)?)?;
    let back = IfCube::read_from(std::fs::File::open(&path)?)?;
    println!("round trip identical: {}", back == cube);
    std::fs::remove_file(path)?;
    Ok(())
}
