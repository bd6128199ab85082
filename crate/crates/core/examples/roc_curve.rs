//! ROC of the range detector for 2D-OMP, swept over relative thresholds.

use csfmcw::bench::{roc_area, roc_sweep, ExperimentConfig, MethodName, MethodSpec};
use csfmcw::range::DetectionThreshold;

fn main() -> csfmcw::Result<()> {
    let exp = ExperimentConfig::standard(MethodSpec::standard(MethodName::TwodOmp));
    let levels: Vec<f64> = (1..10).map(|k| k as f64 * 0.1).collect();
    let t: Vec<DetectionThreshold> = levels.iter().map(|&v| DetectionThreshold::Relative(v)).collect();
    let points = roc_sweep(&exp, &t, 30, 3)?;
    println!("threshold fa_rate hit_rate");
    for (v, p) in levels.iter().zip(&points) {
        println!("{v:.1} {:.3} {:.3}", p.fa_rate, p.hit_rate);
    }
    println!("auc {:.3}", roc_area(&points));
    Ok(())
}
