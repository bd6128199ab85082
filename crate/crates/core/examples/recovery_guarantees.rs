//! Measurement bounds, grid conditions and empirical coherence for the
//! 24 GHz preset on the guarantee grids.

use csfmcw::guarantees::{guarantee_report, ReportRequest};
use csfmcw::scene::{build_grids, GridRequest, RadarConfig, RangeGridSpec};

fn main() -> csfmcw::Result<()> {
    let config = RadarConfig::automotive_24ghz();
    let v = config.max_velocity_mps();
    let grids = build_grids(
        &config,
        &GridRequest::Guarantee {
            velocity_mps: (-v, v - config.velocity_resolution_mps()),
            sin_angle: (-1.0, 1.0),
            range: RangeGridSpec::default(),
        },
    )?;
    let req = ReportRequest {
        gram_draws: 2000,
        tail_draws: 2000,
        seed: 1,
        ..ReportRequest::default()
    };
    let report = guarantee_report(&config, &grids, &req)?;
    println!("grid {} x {}", report.inputs.g_d, report.inputs.g_theta);
    println!("P_min {} (have {})", report.bounds.uniform.p_min, report.inputs.p);
    println!("N_T N_R min {:?}", report.bounds.uniform.ntnr_min);
    println!(
        "coherence tail bound at θ = {}: {:.4}",
        req.theta, report.bounds.coherence_tail
    );
    println!("error factor {:.4}", report.bounds.nonuniform.error_factor);
    println!("coherence conditions: {}", report.empirical.grid_uniform.worst_location);
    println!("{}", serde_json::to_string_pretty(&report.flags).unwrap());
    Ok(())
}
