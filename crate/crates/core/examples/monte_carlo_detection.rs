//! Hit and false-alarm rates of every method on random five-target scenes.
//!
//! `cargo run --release --example monte_carlo_detection -- 50`

use csfmcw::bench::{monte_carlo, write_csv, ExperimentConfig, MethodName, MethodSpec};

fn main() -> csfmcw::Result<()> {
    let runs = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(20);
    let mut reports = Vec::new();
    for m in MethodName::ALL {
        let r = monte_carlo(&ExperimentConfig::standard(MethodSpec::standard(m)), runs, 42)?;
        eprintln!("{m}: hit {:.3} fa {:.3}", r.hit_rate, r.fa_rate);
        reports.push(r);
    }
    write_csv(&reports, std::io::stdout())
}
