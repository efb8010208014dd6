//! One-dimensional Haar averaging/differencing.
//!
//! A single pass over the leading `width` samples replaces each pair
//! `(x[2k], x[2k+1])` by its average `a = (x[2k] + x[2k+1]) / 2`, stored at
//! `k`, and its detail `x[2k] - a`, stored at `width / 2 + k`. The full
//! transform repeats the pass on the averages until one value remains.

use crate::error::{Error, Result};

/// One averaging/differencing pass over `data[..width]`. `scratch` must hold
/// at least `width` values. `width` must be even.
#[inline]
pub(crate) fn forward_pass(data: &mut [f64], width: usize, scratch: &mut [f64]) {
    let half = width / 2;
    for k in 0..half {
        let first = data[2 * k];
        let avg = (first + data[2 * k + 1]) / 2.0;
        scratch[k] = avg;
        scratch[half + k] = first - avg;
    }
    data[..width].copy_from_slice(&scratch[..width]);
}

/// Inverse of [`forward_pass`]: rebuilds `x[2k] = a + d`, `x[2k+1] = a - d`.
#[inline]
pub(crate) fn inverse_pass(data: &mut [f64], width: usize, scratch: &mut [f64]) {
    let half = width / 2;
    for k in 0..half {
        let avg = data[k];
        let detail = data[half + k];
        scratch[2 * k] = avg + detail;
        scratch[2 * k + 1] = avg - detail;
    }
    data[..width].copy_from_slice(&scratch[..width]);
}

/// Full in-place decomposition down to a single overall average.
pub(crate) fn forward_in_place(data: &mut [f64], scratch: &mut [f64]) {
    let mut width = data.len();
    while width > 1 {
        forward_pass(data, width, scratch);
        width /= 2;
    }
}

pub(crate) fn inverse_in_place(data: &mut [f64], scratch: &mut [f64]) {
    let mut width = 2;
    while width <= data.len() {
        inverse_pass(data, width, scratch);
        width *= 2;
    }
}

fn check_len(len: usize) -> Result<()> {
    if len == 0 || !len.is_power_of_two() {
        return Err(Error::InvalidLength(len));
    }
    Ok(())
}

/// Full 1D Haar decomposition. Element 0 of the result is the mean of the
/// input; details of each pass follow the averages they were derived from.
///
/// ```
/// use hwz_core::transform::forward1d;
/// assert_eq!(forward1d(&[9.0, 7.0, 3.0, 5.0]).unwrap(), vec![6.0, 2.0, 1.0, -1.0]);
/// ```
pub fn forward1d(values: &[f64]) -> Result<Vec<f64>> {
    check_len(values.len())?;
    let mut out = values.to_vec();
    let mut scratch = vec![0.0; out.len()];
    forward_in_place(&mut out, &mut scratch);
    Ok(out)
}

/// Exact inverse of [`forward1d`], coarsest level first.
pub fn inverse1d(values: &[f64]) -> Result<Vec<f64>> {
    check_len(values.len())?;
    let mut out = values.to_vec();
    let mut scratch = vec![0.0; out.len()];
    inverse_in_place(&mut out, &mut scratch);
    Ok(out)
}
