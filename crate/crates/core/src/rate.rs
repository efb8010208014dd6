//! Threshold search for a target compression ratio or a target PSNR.
//!
//! Under hard thresholding the stored coefficients only change when epsilon
//! crosses one of the distinct detail magnitudes, so both searches run over
//! the candidate set `{0} ∪ {next_up(m)}`: the smallest epsilons that zero
//! everything up to and including magnitude `m`.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::image::GrayImage;
use crate::metrics::{ratio_from_counts, MetricsReport};
use crate::pipeline::{Compressed, Pipeline};
use crate::transform::TransformSpec;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RateTarget {
    CompressionRatio(f64),
    Psnr { db: f64, tolerance_db: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TargetStatus {
    Met,
    /// Even zeroing every detail does not reach the requested ratio.
    Unreachable,
    /// PSNR stays above the requested band at the chosen epsilon.
    Overshoot,
}

#[derive(Debug, Clone)]
pub struct RateSolution {
    pub epsilon: f64,
    pub status: TargetStatus,
    pub report: MetricsReport,
    pub compressed: Compressed,
}

/// Distinct nonzero detail magnitudes, ascending.
pub fn detail_magnitudes(pipeline: &Pipeline<'_>) -> Vec<f64> {
    let mut mags = sorted_magnitudes(pipeline);
    mags.dedup();
    mags
}

fn sorted_magnitudes(pipeline: &Pipeline<'_>) -> Vec<f64> {
    let mut mags: Vec<f64> = pipeline
        .mask()
        .details(pipeline.coefficients())
        .filter(|&v| v != 0.0)
        .map(f64::abs)
        .collect();
    mags.sort_by(f64::total_cmp);
    mags
}

/// `0` followed by `next_up(m)` for each distinct detail magnitude `m`.
pub fn candidate_epsilons(pipeline: &Pipeline<'_>) -> Vec<f64> {
    std::iter::once(0.0)
        .chain(detail_magnitudes(pipeline).into_iter().map(f64::next_up))
        .collect()
}

pub fn solve(image: &GrayImage, spec: TransformSpec, target: RateTarget) -> Result<RateSolution> {
    match target {
        RateTarget::CompressionRatio(cr) => solve_for_cr(image, spec, cr),
        RateTarget::Psnr { db, tolerance_db } => solve_for_psnr(image, spec, db, tolerance_db),
    }
}

/// Smallest candidate epsilon whose compression ratio reaches `target`.
pub fn solve_for_cr(image: &GrayImage, spec: TransformSpec, target: f64) -> Result<RateSolution> {
    if target.is_nan() || target < 1.0 {
        return Err(Error::InvalidTarget(format!(
            "compression ratio {target} must be >= 1"
        )));
    }
    let pipeline = Pipeline::new(image, spec)?;
    let nnz_original = pipeline.padded().nnz();
    let nnz_all = pipeline.coefficients().nnz();
    let mags = sorted_magnitudes(&pipeline);

    // walk distinct magnitudes; `zeroed` counts details with |x| <= current
    let mut chosen = (0.0, ratio_from_counts(nnz_original, nnz_all) >= target);
    let mut zeroed = 0;
    let mut i = 0;
    while !chosen.1 && i < mags.len() {
        let m = mags[i];
        while i < mags.len() && mags[i] == m {
            i += 1;
            zeroed += 1;
        }
        chosen = (
            m.next_up(),
            ratio_from_counts(nnz_original, nnz_all - zeroed) >= target,
        );
    }
    let (epsilon, met) = chosen;
    let compressed = pipeline.run_hard(epsilon)?;
    Ok(RateSolution {
        epsilon,
        status: if met {
            TargetStatus::Met
        } else {
            TargetStatus::Unreachable
        },
        report: compressed.report.clone(),
        compressed,
    })
}

struct PsnrCurve<'p, 'a> {
    pipeline: &'p Pipeline<'a>,
    candidates: &'p [f64],
    cache: Vec<Option<f64>>,
}

impl PsnrCurve<'_, '_> {
    fn at(&mut self, i: usize) -> Result<f64> {
        if let Some(p) = self.cache[i] {
            return Ok(p);
        }
        let p = self.pipeline.run_hard(self.candidates[i])?.report.psnr_db;
        self.cache[i] = Some(p);
        Ok(p)
    }

    fn fill_all(&mut self) -> Result<()> {
        let pipeline = self.pipeline;
        let missing: Vec<usize> = (0..self.candidates.len())
            .filter(|&i| self.cache[i].is_none())
            .collect();
        let values = missing
            .par_iter()
            .map(|&i| pipeline.run_hard(self.candidates[i]).map(|c| c.report.psnr_db))
            .collect::<Result<Vec<f64>>>()?;
        for (i, v) in missing.into_iter().zip(values) {
            self.cache[i] = Some(v);
        }
        Ok(())
    }
}

/// Largest index whose PSNR is at least `floor`, preferring indices whose
/// PSNR also stays at or below `ceiling`. Index 0 always qualifies.
pub fn select_from_curve(psnr: &[f64], floor: f64, ceiling: f64) -> usize {
    let feasible = || psnr.iter().enumerate().rev().filter(|&(_, &p)| p >= floor);
    feasible()
        .find(|&(_, &p)| p <= ceiling)
        .or_else(|| feasible().next())
        .map_or(0, |(i, _)| i)
}

const NEIGHBOR_CHECK: usize = 4;

/// Largest candidate epsilon whose PSNR stays within `tol_db` of `target_db`
/// (or above it when the band cannot be hit).
///
/// PSNR is treated as nonincreasing in epsilon for a binary search. The
/// neighborhood of the answer is then checked against that assumption and a
/// full scan replaces the search whenever the check fails.
pub fn solve_for_psnr(
    image: &GrayImage,
    spec: TransformSpec,
    target_db: f64,
    tol_db: f64,
) -> Result<RateSolution> {
    if target_db.is_nan() || target_db <= 0.0 {
        return Err(Error::InvalidTarget(format!(
            "PSNR target {target_db} dB must be positive"
        )));
    }
    if !(tol_db.is_finite() && tol_db > 0.0) {
        return Err(Error::InvalidTarget(format!(
            "PSNR tolerance {tol_db} dB must be positive"
        )));
    }
    let pipeline = Pipeline::new(image, spec)?;
    let floor = target_db - tol_db;
    let ceiling = target_db + tol_db;

    let candidates = candidate_epsilons(&pipeline);
    let index = if target_db == f64::INFINITY {
        0
    } else {
        let n = candidates.len();
        let mut curve = PsnrCurve {
            pipeline: &pipeline,
            cache: vec![None; n],
            candidates: &candidates,
        };
        let last = n - 1;
        let found = if curve.at(last)? >= floor {
            last
        } else {
            // curve(lo) >= floor > curve(hi)
            let (mut lo, mut hi) = (0, last);
            while hi - lo > 1 {
                let mid = lo + (hi - lo) / 2;
                if curve.at(mid)? >= floor {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            lo
        };

        let mut consistent = true;
        let here = curve.at(found)?;
        for j in found.saturating_sub(NEIGHBOR_CHECK)..found {
            consistent &= curve.at(j)? >= here;
        }
        for j in found + 1..(found + 1 + NEIGHBOR_CHECK).min(n) {
            consistent &= curve.at(j)? < floor;
        }
        if consistent {
            found
        } else {
            curve.fill_all()?;
            let all: Vec<f64> = curve.cache.iter().map(|p| p.expect("filled")).collect();
            select_from_curve(&all, floor, ceiling)
        }
    };

    let epsilon = candidates[index];
    let compressed = pipeline.run_hard(epsilon)?;
    let psnr = compressed.report.psnr_db;
    let status = if psnr > ceiling {
        TargetStatus::Overshoot
    } else {
        TargetStatus::Met
    };
    Ok(RateSolution {
        epsilon,
        status,
        report: compressed.report.clone(),
        compressed,
    })
}
