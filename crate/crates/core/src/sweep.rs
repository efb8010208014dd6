//! Epsilon sweeps over the thresholding policies, written as CSV.

use std::io::Write;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::image::GrayImage;
use crate::metrics::format_value;
use crate::pipeline::Pipeline;
use crate::threshold::{registry, ThresholdMethod};
use crate::transform::TransformSpec;

pub const CSV_HEADER: [&str; 7] = [
    "epsilon",
    "method",
    "cr",
    "mse",
    "psnr_db",
    "energy_retained_pct",
    "nnz",
];

/// Methods swept over the epsilon grid, in output order. Universal picks its
/// own epsilon and contributes a single row after these.
pub const SWEPT_METHODS: [ThresholdMethod; 2] = [ThresholdMethod::Hard, ThresholdMethod::Soft];

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub epsilon: f64,
    pub method: ThresholdMethod,
    pub cr: f64,
    pub mse: f64,
    pub psnr_db: f64,
    pub energy_retained_pct: f64,
    pub nnz: usize,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
}

impl SweepReport {
    pub fn rows_for(&self, method: ThresholdMethod) -> impl Iterator<Item = &SweepRow> {
        self.rows.iter().filter(move |r| r.method == method)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(CSV_HEADER)?;
        for r in &self.rows {
            w.write_record([
                format_value(r.epsilon),
                r.method.to_string(),
                format_value(r.cr),
                format_value(r.mse),
                format_value(r.psnr_db),
                format_value(r.energy_retained_pct),
                r.nnz.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Parse `a,b,c` or `lo:hi:step` into a sorted, deduplicated epsilon grid.
pub fn parse_epsilons(spec: &str) -> Result<Vec<f64>> {
    let bad = |msg: String| Error::InvalidSweep(msg);
    let num = |s: &str| -> Result<f64> {
        let v: f64 = s
            .trim()
            .parse()
            .map_err(|_| bad(format!("`{s}` is not a number")))?;
        if !(v.is_finite() && v >= 0.0) {
            return Err(bad(format!("epsilon {v} must be finite and nonnegative")));
        }
        Ok(v)
    };
    let mut eps = if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        let [lo, hi, step] = parts[..] else {
            return Err(bad(format!("range `{spec}` must look like lo:hi:step")));
        };
        let (lo, hi, step) = (num(lo)?, num(hi)?, num(step)?);
        if step <= 0.0 || hi < lo {
            return Err(bad(format!("empty range `{spec}`")));
        }
        let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
        if count > 1_000_000 {
            return Err(bad(format!("range `{spec}` has {count} points")));
        }
        (0..count).map(|k| lo + k as f64 * step).collect()
    } else {
        spec.split(',').map(num).collect::<Result<Vec<f64>>>()?
    };
    if eps.is_empty() {
        return Err(bad("no epsilons given".into()));
    }
    eps.sort_by(f64::total_cmp);
    eps.dedup();
    Ok(eps)
}

/// Hard and soft at every epsilon, then the universal point.
pub fn analyze(image: &GrayImage, spec: TransformSpec, epsilons: &[f64]) -> Result<SweepReport> {
    let pipeline = Pipeline::new(image, spec)?;
    let mut grid: Vec<(ThresholdMethod, Option<f64>)> = SWEPT_METHODS
        .iter()
        .flat_map(|&m| epsilons.iter().map(move |&e| (m, Some(e))))
        .collect();
    grid.push((ThresholdMethod::Universal, None));

    let rows = grid
        .par_iter()
        .map(|&(method, eps)| {
            let policy = registry::build(method, eps)?;
            let out = pipeline.run(&*policy)?;
            Ok(SweepRow {
                epsilon: out.header.epsilon,
                method,
                cr: out.report.cr,
                mse: out.report.mse,
                psnr_db: out.report.psnr_db,
                energy_retained_pct: out.report.energy_retained_pct,
                nnz: out.report.nnz_thresholded,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepReport { rows })
}
