//! Doppler-angle recovery in a single noiseless range slice with every sparse
//! solver, on a grid with Doppler spacing of one resolution cell and sin-angle
//! spacing of one sixth.

use csfmcw::bench::Acquisition;
use csfmcw::linalg::CMatrix;
use csfmcw::scene::{build_grids, GridRequest, RadarConfig, RangeGridSpec};
use csfmcw::solvers::*;
use csfmcw::Complex64;

fn main() -> csfmcw::Result<()> {
    let config = RadarConfig::automotive_24ghz();
    let v = config.max_velocity_mps();
    let grids = build_grids(
        &config,
        &GridRequest::Guarantee {
            velocity_mps: (-v, v - config.velocity_resolution_mps()),
            sin_angle: (-0.5, 0.5),
            range: RangeGridSpec::default(),
        },
    )?;
    let acq = Acquisition::sparse(&config, 9)?;
    let b = build_doppler_dictionary(&acq.schedule, &grids.doppler_grid_mps, &config)?.matrix;
    let c = build_angle_dictionary(&acq.geometry, &grids.angle_grid_rad, &config)?.matrix;
    let ga = c.cols();

    // Two targets on grid points: (doppler 9, angle 1) and (doppler 20, angle 5).
    let mut z = CMatrix::zeros(ga, b.cols());
    z.set(1, 9, Complex64::new(1.0, 0.0));
    z.set(5, 20, Complex64::new(0.0, 0.8));
    let y = c
        .mul(&z)?
        .mul(&CMatrix::from_fn(b.cols(), b.rows(), |g, p| b.get(p, g)))?;
    let op = KronOperator::new(b.clone(), c.clone());

    let show = |name: &str, sol: &SparseSolution| {
        let sol = sol.threshold(0.1);
        let picks: Vec<String> = sol
            .support(ga)
            .iter()
            .map(|&(a, d)| {
                format!(
                    "({:.2} m/s, {:.2} deg)",
                    grids.doppler_grid_mps[d],
                    grids.angle_grid_rad[a].to_degrees()
                )
            })
            .collect();
        println!("{name:6} {}", picks.join(" "));
    };
    let params = OmpParams {
        k_max: 2,
        residual_tol: 1e-9,
    };
    show("omp", &omp_1d(y.as_slice(), &b.kron(&c), &params)?);
    show("2d-omp", &omp_2d(&y, &c, &b, &params)?);
    show("bp", &basis_pursuit(y.as_slice(), &op, &BpParams::default())?);
    show("lasso", &lasso(y.as_slice(), &op, &LassoParams::default())?);
    println!(
        "truth  ({:.2} m/s, {:.2} deg) ({:.2} m/s, {:.2} deg)",
        grids.doppler_grid_mps[9],
        grids.angle_grid_rad[1].to_degrees(),
        grids.doppler_grid_mps[20],
        grids.angle_grid_rad[5].to_degrees()
    );
    Ok(())
}
