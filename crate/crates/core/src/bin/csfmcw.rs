//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 for invalid configuration or arguments, 2 for
//! runtime failures such as I/O errors.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use csfmcw::bench::{
    calibration_sweep, monte_carlo, roc_area, roc_sweep, run_pipeline, write_csv, MethodName, MethodSpec,
};
use csfmcw::config::ConfigDocument;
use csfmcw::guarantees::guarantee_report;
use csfmcw::range::DetectionThreshold;
use csfmcw::scene::build_grids;
use csfmcw::synth::IfCube;
use csfmcw::{Error, Result};

#[derive(Parser)]
#[command(name = "csfmcw", version, about = "Compressive MIMO-FMCW radar estimation toolkit")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// JSON experiment document; defaults apply when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Master seed, overriding the document's `seed`.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output file; stdout when omitted (required by `synth`).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Monte Carlo runs, overriding `experiment.runs`.
    #[arg(long, global = true)]
    runs: Option<usize>,
    /// Worker threads; defaults to all cores.
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Synthesise one IF cube and write it in the binary cube format.
    Synth,
    /// Run one method on a cube written by `synth` with the same config and seed.
    Estimate {
        /// Cube file.
        cube: PathBuf,
        /// Method, overriding `experiment.method`.
        #[arg(long)]
        method: Option<MethodName>,
    },
    /// Monte Carlo hit and false-alarm statistics as CSV.
    Bench {
        /// Methods to run; defaults to `experiment.method`.
        #[arg(long, value_delimiter = ',')]
        methods: Vec<MethodName>,
    },
    /// ROC over relative range-detection thresholds, as whitespace-separated columns.
    Roc {
        #[arg(long, value_delimiter = ',', default_values_t = default_roc_thresholds())]
        thresholds: Vec<f64>,
    },
    /// Calibration-error sweep as CSV.
    Calib {
        /// Phase error standard deviations, degrees.
        #[arg(long, value_delimiter = ',', default_values_t = vec![0.0, 0.25, 1.0, 2.0, 3.0])]
        sigma_theta_deg: Vec<f64>,
        /// Range error standard deviations, metres.
        #[arg(long, value_delimiter = ',', default_values_t = vec![0.0, 0.1, 0.4, 0.8, 1.2])]
        sigma_r: Vec<f64>,
        #[arg(long, value_delimiter = ',')]
        methods: Vec<MethodName>,
    },
    /// Recovery-guarantee report as JSON.
    Guarantees,
    /// Grid tables, one `kind index value` line per point.
    Grids,
}

fn default_roc_thresholds() -> Vec<f64> {
    (1..20).map(|k| k as f64 * 0.05).collect()
}

fn output(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn load(global: &Global) -> Result<ConfigDocument> {
    let mut doc = match &global.config {
        Some(p) => ConfigDocument::load(p).map_err(|e| match e {
            Error::Io(io) => Error::invalid_config(format!("cannot read {}: {io}", p.display())),
            other => other,
        })?,
        None => ConfigDocument::default(),
    };
    if let Some(s) = global.seed {
        doc.seed = s;
    }
    if let Some(r) = global.runs {
        doc.experiment.runs = r;
    }
    Ok(doc)
}

fn methods_or_default(doc: &ConfigDocument, methods: &[MethodName]) -> Vec<MethodSpec> {
    if methods.is_empty() {
        vec![doc.method_spec()]
    } else {
        methods
            .iter()
            .map(|&m| {
                let mut d = doc.clone();
                d.experiment.method = m;
                d.experiment.method_spec = None;
                d.method_spec()
            })
            .collect()
    }
}

fn run(cli: Cli) -> Result<()> {
    if let Some(n) = cli.global.threads {
        if n == 0 {
            return Err(Error::invalid_config("--threads must be >= 1"));
        }
        // Fails only if a pool already exists, which cannot happen here.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let doc = load(&cli.global)?;
    let seed = doc.seed;
    match &cli.command {
        Command::Synth => {
            let exp = doc.experiment_config()?;
            let path = cli
                .global
                .out
                .as_ref()
                .ok_or_else(|| Error::invalid_config("synth needs --out"))?;
            let grids = exp.build_grids()?;
            let acq = exp.acquisition(seed)?;
            let scene = match doc.explicit_scene() {
                Some(s) => s,
                None => exp.scene(&grids, seed)?,
            };
            let cube = exp.synthesize(&scene, &acq, seed)?;
            cube.write_to(BufWriter::new(File::create(path)?))?;
            println!("{}", serde_json::to_string_pretty(&scene)?);
        }
        Command::Estimate { cube, method } => {
            let mut d = doc.clone();
            if let Some(m) = method {
                d.experiment.method = *m;
                d.experiment.method_spec = None;
            }
            let exp = d.experiment_config()?;
            let grids = exp.build_grids()?;
            let acq = exp.acquisition(seed)?;
            let cube = read_cube(cube)?;
            let out = run_pipeline(&cube, &exp.method, &grids, &acq, exp.noise().variance)?;
            let mut w = output(&cli.global.out)?;
            writeln!(w, "range_m,velocity_mps,aoa_deg,amplitude")?;
            for e in &out.estimates {
                writeln!(
                    w,
                    "{},{},{},{}",
                    e.range_m,
                    e.velocity_mps,
                    e.aoa_rad.to_degrees(),
                    e.amplitude
                )?;
            }
            w.flush()?;
        }
        Command::Bench { methods } => {
            let base = doc.experiment_config()?;
            let mut reports = Vec::new();
            for m in methods_or_default(&doc, methods) {
                let exp = csfmcw::bench::ExperimentConfig {
                    method: m,
                    ..base.clone()
                };
                reports.push(monte_carlo(&exp, doc.experiment.runs, seed)?);
            }
            write_csv(&reports, output(&cli.global.out)?)?;
        }
        Command::Roc { thresholds } => {
            let exp = doc.experiment_config()?;
            let t: Vec<DetectionThreshold> = thresholds.iter().map(|&v| DetectionThreshold::Relative(v)).collect();
            let points = roc_sweep(&exp, &t, doc.experiment.runs, seed)?;
            let mut w = output(&cli.global.out)?;
            writeln!(w, "# method {} auc {}", exp.method.name, roc_area(&points))?;
            writeln!(w, "# threshold fa_rate hit_rate")?;
            for (v, p) in thresholds.iter().zip(&points) {
                writeln!(w, "{v} {} {}", p.fa_rate, p.hit_rate)?;
            }
            w.flush()?;
        }
        Command::Calib {
            sigma_theta_deg,
            sigma_r,
            methods,
        } => {
            let base = doc.experiment_config()?;
            let st: Vec<f64> = sigma_theta_deg.iter().map(|d| d.to_radians()).collect();
            let reports = calibration_sweep(
                &base,
                &st,
                sigma_r,
                &methods_or_default(&doc, methods),
                doc.experiment.runs,
                seed,
            )?;
            write_csv(&reports, output(&cli.global.out)?)?;
        }
        Command::Guarantees => {
            let cfg = doc.radar_config()?;
            let grids = build_grids(&cfg, &doc.grids)?;
            let mut req = doc.guarantees.clone();
            if cli.global.seed.is_some() {
                req.seed = seed;
            }
            let report = guarantee_report(&cfg, &grids, &req)?;
            let mut w = output(&cli.global.out)?;
            serde_json::to_writer_pretty(&mut w, &report)?;
            writeln!(w)?;
            w.flush()?;
        }
        Command::Grids => {
            let cfg = doc.radar_config()?;
            let grids = build_grids(&cfg, &doc.grids)?;
            let mut w = output(&cli.global.out)?;
            writeln!(w, "# kind index value (range m, velocity m/s, angle deg)")?;
            for (i, v) in grids.range_grid_m.iter().enumerate() {
                writeln!(w, "range {i} {v}")?;
            }
            for (i, v) in grids.doppler_grid_mps.iter().enumerate() {
                writeln!(w, "velocity {i} {v}")?;
            }
            for (i, v) in grids.angle_grid_rad.iter().enumerate() {
                writeln!(w, "angle {i} {}", v.to_degrees())?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

fn read_cube(path: &Path) -> Result<IfCube> {
    IfCube::read_from(BufReader::new(File::open(path)?))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_config_error() { 1 } else { 2 })
        }
    }
}
