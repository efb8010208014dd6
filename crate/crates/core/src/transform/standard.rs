use rayon::prelude::*;

use super::haar1d;
use super::{check_pow2_shape, Decomposition};
use crate::error::Result;
use crate::matrix::CoeffMatrix;
use crate::threshold::ExemptMask;

fn rows_forward(m: &mut CoeffMatrix) {
    let cols = m.cols();
    m.as_mut_slice().par_chunks_mut(cols).for_each_init(
        || vec![0.0; cols],
        |scratch, row| haar1d::forward_in_place(row, scratch),
    );
}

fn rows_inverse(m: &mut CoeffMatrix) {
    let cols = m.cols();
    m.as_mut_slice().par_chunks_mut(cols).for_each_init(
        || vec![0.0; cols],
        |scratch, row| haar1d::inverse_in_place(row, scratch),
    );
}

/// Full 1D transform of every row, then of every column. Element (0, 0) of
/// the result is the mean of all entries.
pub fn forward2d_standard(m: &CoeffMatrix) -> Result<CoeffMatrix> {
    check_pow2_shape(m)?;
    let mut out = m.clone();
    rows_forward(&mut out);
    let mut t = out.transpose();
    rows_forward(&mut t);
    Ok(t.transpose())
}

/// Undoes the column transform, then the row transform.
pub fn inverse2d_standard(m: &CoeffMatrix) -> Result<CoeffMatrix> {
    check_pow2_shape(m)?;
    let mut t = m.transpose();
    rows_inverse(&mut t);
    let mut out = t.transpose();
    rows_inverse(&mut out);
    Ok(out)
}

/// Standard (row-then-column) decomposition, always taken to full depth.
#[derive(Debug, Clone, Copy, Default)]
pub struct Standard;

impl Decomposition for Standard {
    fn name(&self) -> &'static str {
        "standard"
    }

    fn levels(&self) -> u32 {
        0
    }

    fn forward(&self, m: &CoeffMatrix) -> Result<CoeffMatrix> {
        forward2d_standard(m)
    }

    fn inverse(&self, m: &CoeffMatrix) -> Result<CoeffMatrix> {
        inverse2d_standard(m)
    }

    fn exempt_mask(&self, rows: usize, cols: usize) -> Result<ExemptMask> {
        ExemptMask::new(rows, cols, 1, 1)
    }
}
