//! Objective quality and compression measures.
//!
//! Infinite compression ratio and infinite PSNR are reported as
//! `f64::INFINITY` and rendered as `"inf"` by [`format_value`].

use crate::error::{Error, Result};
use crate::image::GrayImage;
use crate::matrix::CoeffMatrix;

/// Nonzero count of `original` over nonzero count of `thresholded`.
///
/// Returns 0 when `original` has no nonzeros and infinity when only
/// `thresholded` is all zero.
pub fn compression_ratio(original: &CoeffMatrix, thresholded: &CoeffMatrix) -> Result<f64> {
    original.ensure_same_shape(thresholded)?;
    Ok(ratio_from_counts(original.nnz(), thresholded.nnz()))
}

pub(crate) fn ratio_from_counts(nnz_original: usize, nnz_thresholded: usize) -> f64 {
    if nnz_original == 0 {
        0.0
    } else if nnz_thresholded == 0 {
        f64::INFINITY
    } else {
        nnz_original as f64 / nnz_thresholded as f64
    }
}

fn squared_error_sum(a: &GrayImage, b: &GrayImage) -> u64 {
    a.pixels()
        .iter()
        .zip(b.pixels())
        .map(|(&x, &y)| {
            let d = i64::from(x) - i64::from(y);
            (d * d) as u64
        })
        .sum()
}

pub fn mse(a: &GrayImage, b: &GrayImage) -> Result<f64> {
    a.ensure_same_shape(b)?;
    let n = a.width() * a.height();
    if n == 0 {
        return Ok(0.0);
    }
    Ok(squared_error_sum(a, b) as f64 / n as f64)
}

/// PSNR in dB for a given MSE on 8-bit data; infinite when `mse == 0`.
pub fn psnr_from_mse(mse: f64) -> f64 {
    if mse == 0.0 {
        f64::INFINITY
    } else {
        20.0 * (255.0 / mse.sqrt()).log10()
    }
}

pub fn psnr(a: &GrayImage, b: &GrayImage) -> Result<f64> {
    mse(a, b).map(psnr_from_mse)
}

/// Percentage of the reference's squared-sum energy present in `b`.
pub fn energy_retained(a: &GrayImage, b: &GrayImage) -> Result<f64> {
    a.ensure_same_shape(b)?;
    let energy = |img: &GrayImage| -> u64 { img.pixels().iter().map(|&p| u64::from(p) * u64::from(p)).sum() };
    let reference = energy(a);
    if reference == 0 {
        return Err(Error::DegenerateReference);
    }
    Ok(100.0 * energy(b) as f64 / reference as f64)
}

/// Metrics for one compress/decompress cycle.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport {
    pub cr: f64,
    pub mse: f64,
    pub psnr_db: f64,
    pub energy_retained_pct: f64,
    pub nnz_original: usize,
    pub nnz_thresholded: usize,
}

impl MetricsReport {
    /// `original` is the matrix fed to the transform, `thresholded` the
    /// coefficients that get stored; images are compared pixel-for-pixel.
    pub fn compute(
        original: &CoeffMatrix,
        thresholded: &CoeffMatrix,
        reference: &GrayImage,
        reconstructed: &GrayImage,
    ) -> Result<Self> {
        let cr = compression_ratio(original, thresholded)?;
        let mse = mse(reference, reconstructed)?;
        let energy_retained_pct = match energy_retained(reference, reconstructed) {
            Ok(e) => e,
            // an all-black reference keeps all of its (zero) energy only if
            // the reconstruction is black too
            Err(Error::DegenerateReference) if mse == 0.0 => 100.0,
            Err(Error::DegenerateReference) => f64::INFINITY,
            Err(e) => return Err(e),
        };
        Ok(Self {
            cr,
            mse,
            psnr_db: psnr_from_mse(mse),
            energy_retained_pct,
            nnz_original: original.nnz(),
            nnz_thresholded: thresholded.nnz(),
        })
    }
}

/// Render a metric for reports: `"inf"` for infinity, shortest round-trip
/// decimal otherwise.
pub fn format_value(v: f64) -> String {
    if v == f64::INFINITY {
        "inf".to_string()
    } else if v == f64::NEG_INFINITY {
        "-inf".to_string()
    } else {
        format!("{v}")
    }
}
