//! Aggregate tables as CSV: one header line, one row per cell, LF endings.
//! Floats are written with Rust's shortest round-trip formatting, so parsing a
//! file back yields bit-identical values.

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::method::MethodName;
use super::metrics::AggregateReport;
use crate::error::Result;

pub const CSV_HEADER: [&str; 11] = [
    "method",
    "snr_db",
    "sigma_theta",
    "sigma_r",
    "hit_rate",
    "fa_rate",
    "rmse_range",
    "rmse_vel",
    "rmse_aoa",
    "runs",
    "wall_time",
];

/// One CSV row. Angles are in radians, ranges in metres.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CsvRow {
    pub method: MethodName,
    pub snr_db: f64,
    pub sigma_theta: f64,
    pub sigma_r: f64,
    pub hit_rate: f64,
    pub fa_rate: f64,
    pub rmse_range: f64,
    pub rmse_vel: f64,
    pub rmse_aoa: f64,
    pub runs: usize,
    pub wall_time: f64,
}

impl From<&AggregateReport> for CsvRow {
    fn from(r: &AggregateReport) -> Self {
        CsvRow {
            method: r.method,
            snr_db: r.snr_db,
            sigma_theta: r.sigma_theta,
            sigma_r: r.sigma_r,
            hit_rate: r.hit_rate,
            fa_rate: r.fa_rate,
            rmse_range: r.rmse_range_m,
            rmse_vel: r.rmse_velocity_mps,
            rmse_aoa: r.rmse_aoa_rad,
            runs: r.runs,
            wall_time: r.wall_time_s,
        }
    }
}

pub fn write_csv<W: Write>(reports: &[AggregateReport], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .has_headers(false)
        .from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in reports {
        let row = CsvRow::from(r);
        w.write_record([
            row.method.as_str().to_string(),
            row.snr_db.to_string(),
            row.sigma_theta.to_string(),
            row.sigma_r.to_string(),
            row.hit_rate.to_string(),
            row.fa_rate.to_string(),
            row.rmse_range.to_string(),
            row.rmse_vel.to_string(),
            row.rmse_aoa.to_string(),
            row.runs.to_string(),
            row.wall_time.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Writes `reports` to `path`, replacing any existing file.
pub fn emit_csv(reports: &[AggregateReport], path: &Path) -> Result<()> {
    let f = BufWriter::new(File::create(path)?);
    write_csv(reports, f)
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<CsvRow>> {
    let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
    let mut rows = Vec::new();
    for rec in r.deserialize() {
        rows.push(rec?);
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_report_is_header_only() {
        let mut buf = Vec::new();
        write_csv(&[], &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), format!("{}\n", CSV_HEADER.join(",")));
    }
}
