//! Classical 3D-DFT processing on the full 4x8 ULA against 2D-OMP on the sparse
//! acquisition for the same scene.

use csfmcw::bench::{run_pipeline, ExperimentConfig, MethodName, MethodSpec};
use csfmcw::scene::{Target, TargetScene};
use csfmcw::Complex64;

fn main() -> csfmcw::Result<()> {
    let scene = TargetScene {
        targets: vec![
            Target {
                range_m: 35.0,
                velocity_mps: 10.0,
                aoa_rad: 5f64.to_radians(),
                gain: Complex64::new(1.0, 0.0),
            },
            Target {
                range_m: 70.0,
                velocity_mps: -20.0,
                aoa_rad: (-12f64).to_radians(),
                gain: Complex64::new(0.8, 0.0),
            },
        ],
    };
    for m in [MethodName::ClassicalDft, MethodName::TwodOmp] {
        let exp = ExperimentConfig::standard(MethodSpec::standard(m));
        let grids = exp.build_grids()?;
        let acq = exp.acquisition(4)?;
        let cube = exp.synthesize(&scene, &acq, 4)?;
        let out = run_pipeline(&cube, &exp.method, &grids, &acq, exp.noise().variance)?;
        println!("{m}: {} samples read", out.samples_consumed);
        for e in &out.estimates {
            println!(
                "  {:.2} m  {:.2} m/s  {:.2} deg",
                e.range_m,
                e.velocity_mps,
                e.aoa_rad.to_degrees()
            );
        }
    }
    Ok(())
}
