//! Region CSV, companion phase file, and analysis report writers.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use irsi_core::algorithms::{RegionBoundary, Scheme};
use irsi_core::analysis::{Classification, ComplexityEstimate, GapBoundReport};
use irsi_core::{Error, Feasibility, Result};

const HEADER: [&str; 8] = ["r_m_target", "r_c_achieved", "alpha_w", "beta_w", "upper_bound", "feasible", "scheme", "seed"];

/// One traced region, tagged by its transmit power in a power sweep.
pub struct Region<'a> {
    pub power_w: Option<f64>,
    pub boundary: &'a RegionBoundary,
}

#[derive(Serialize)]
pub struct AnalysisReport {
    pub feasibility: Feasibility,
    /// Present for two-user scenarios only.
    pub classification: Option<Classification>,
    pub e_factors: Option<Vec<f64>>,
    pub eta: Option<f64>,
    pub gap_bounds: GapBoundReport,
    pub complexity: ComplexityEstimate,
    pub alpha_w: f64,
    pub phases: Vec<f64>,
}

/// Nine significant digits.
fn num(x: f64) -> String {
    format!("{x:.8e}")
}

fn io_error(path: &Path, e: impl std::fmt::Display) -> Error {
    Error::Config(format!("cannot write {}: {e}", path.display()))
}

/// Writes all regions to one CSV; a `power_w` column is appended when the regions
/// carry powers.
pub fn write_region_csv(path: &Path, regions: &[Region], scheme: Scheme, seed: u64) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| io_error(path, e))?;
    let tagged = regions.iter().any(|r| r.power_w.is_some());
    let mut header = HEADER.to_vec();
    if tagged {
        header.push("power_w");
    }
    w.write_record(&header).map_err(|e| io_error(path, e))?;
    for region in regions {
        for p in &region.boundary.points {
            let mut row = vec![
                num(p.r_m_target),
                num(p.r_c_achieved),
                num(p.alpha),
                num(p.beta),
                p.upper_bound.map(num).unwrap_or_default(),
                p.feasible.to_string(),
                scheme.name().to_string(),
                seed.to_string(),
            ];
            if let Some(power) = region.power_w {
                row.push(num(power));
            }
            w.write_record(&row).map_err(|e| io_error(path, e))?;
        }
    }
    w.flush().map_err(|e| io_error(path, e))
}

/// One array of phases (radians) per CSV row, in row order.
pub fn write_phases(path: &Path, regions: &[Region]) -> Result<()> {
    let phases: Vec<Vec<f64>> =
        regions.iter().flat_map(|r| r.boundary.points.iter().map(|p| p.phase_vector.phases())).collect();
    write_json(Some(path), &phases)
}

/// Pretty-printed JSON to `path`, or to stdout.
pub fn write_json<T: Serialize>(path: Option<&Path>, value: &T) -> Result<()> {
    let write = |out: &mut dyn Write| -> io::Result<()> {
        serde_json::to_writer_pretty(&mut *out, value)?;
        writeln!(out)?;
        out.flush()
    };
    match path {
        Some(p) => {
            let file = File::create(p).map_err(|e| io_error(p, e))?;
            write(&mut BufWriter::new(file)).map_err(|e| io_error(p, e))
        }
        None => write(&mut io::stdout().lock()).map_err(|e| Error::Config(format!("stdout: {e}"))),
    }
}
