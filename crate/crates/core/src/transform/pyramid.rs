use super::haar1d;
use super::{check_levels, check_pow2_shape, Decomposition};
use crate::error::Result;
use crate::matrix::CoeffMatrix;
use crate::threshold::ExemptMask;

/// One row pass then one column pass over the top-left `rows x cols` block.
fn forward_level(m: &mut CoeffMatrix, rows: usize, cols: usize, scratch: &mut [f64]) {
    let stride = m.cols();
    let data = m.as_mut_slice();
    for r in 0..rows {
        haar1d::forward_pass(&mut data[r * stride..r * stride + cols], cols, scratch);
    }
    let mut column = vec![0.0; rows];
    for c in 0..cols {
        for r in 0..rows {
            column[r] = data[r * stride + c];
        }
        haar1d::forward_pass(&mut column, rows, scratch);
        for r in 0..rows {
            data[r * stride + c] = column[r];
        }
    }
}

fn inverse_level(m: &mut CoeffMatrix, rows: usize, cols: usize, scratch: &mut [f64]) {
    let stride = m.cols();
    let data = m.as_mut_slice();
    let mut column = vec![0.0; rows];
    for c in 0..cols {
        for r in 0..rows {
            column[r] = data[r * stride + c];
        }
        haar1d::inverse_pass(&mut column, rows, scratch);
        for r in 0..rows {
            data[r * stride + c] = column[r];
        }
    }
    for r in 0..rows {
        haar1d::inverse_pass(&mut data[r * stride..r * stride + cols], cols, scratch);
    }
}

/// Mallat pyramid: each level splits the current LL block into LL/HL/LH/HH
/// quadrants, and only the new LL block is decomposed further.
pub fn forward2d_pyramid(m: &CoeffMatrix, levels: u32) -> Result<CoeffMatrix> {
    check_pow2_shape(m)?;
    check_levels(m.rows(), m.cols(), levels)?;
    let mut out = m.clone();
    let mut scratch = vec![0.0; m.rows().max(m.cols())];
    let (mut rows, mut cols) = m.shape();
    for _ in 0..levels {
        forward_level(&mut out, rows, cols, &mut scratch);
        rows /= 2;
        cols /= 2;
    }
    Ok(out)
}

/// Exact inverse of [`forward2d_pyramid`] with the same level count.
pub fn inverse2d_pyramid(m: &CoeffMatrix, levels: u32) -> Result<CoeffMatrix> {
    check_pow2_shape(m)?;
    check_levels(m.rows(), m.cols(), levels)?;
    let mut out = m.clone();
    let mut scratch = vec![0.0; m.rows().max(m.cols())];
    for level in (0..levels).rev() {
        inverse_level(&mut out, m.rows() >> level, m.cols() >> level, &mut scratch);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy)]
pub struct Pyramid {
    pub levels: u32,
}

impl Decomposition for Pyramid {
    fn name(&self) -> &'static str {
        "pyramid"
    }

    fn levels(&self) -> u32 {
        self.levels
    }

    fn forward(&self, m: &CoeffMatrix) -> Result<CoeffMatrix> {
        forward2d_pyramid(m, self.levels)
    }

    fn inverse(&self, m: &CoeffMatrix) -> Result<CoeffMatrix> {
        inverse2d_pyramid(m, self.levels)
    }

    fn exempt_mask(&self, rows: usize, cols: usize) -> Result<ExemptMask> {
        check_levels(rows, cols, self.levels)?;
        ExemptMask::new(rows, cols, rows >> self.levels, cols >> self.levels)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[test]
    fn two_by_two_single_level() {
        let (a, b, c, d) = (7.0, 3.0, 10.0, 4.0);
        let m = CoeffMatrix::from_rows(&[[a, b], [c, d]]);
        let t = forward2d_pyramid(&m, 1).unwrap();
        let expect = CoeffMatrix::from_rows(&[
            [(a + b + c + d) / 4.0, (a - b + c - d) / 4.0],
            [(a + b - c - d) / 4.0, (a - b - c + d) / 4.0],
        ]);
        assert_eq!(t, expect);
    }

    #[test]
    fn constant_leaves_ll_band_only() {
        let m = CoeffMatrix::from_fn(16, 16, |_, _| 42.0);
        for levels in 1..=4 {
            let t = forward2d_pyramid(&m, levels).unwrap();
            let side = 16 >> levels;
            for (r, c, v) in t.iter_indexed() {
                if r < side && c < side {
                    assert_eq!(v, 42.0);
                } else {
                    assert_eq!(v, 0.0);
                }
            }
        }
    }

    #[test]
    fn zero_detail_reconstructs_constant() {
        let m = CoeffMatrix::from_rows(&[[5.5, 0.0], [0.0, 0.0]]);
        let back = inverse2d_pyramid(&m, 1).unwrap();
        assert_eq!(back, CoeffMatrix::from_fn(2, 2, |_, _| 5.5));
    }

    #[test]
    fn level_bounds() {
        let m = CoeffMatrix::zeros(8, 4);
        assert!(forward2d_pyramid(&m, 2).is_ok());
        assert!(matches!(
            forward2d_pyramid(&m, 3),
            Err(Error::LevelTooDeep {
                levels: 3,
                max: 2,
                ..
            })
        ));
        assert!(matches!(forward2d_pyramid(&m, 0), Err(Error::ZeroLevels)));
        assert!(matches!(
            inverse2d_pyramid(&m, 3),
            Err(Error::LevelTooDeep { .. })
        ));
    }

    #[test]
    fn rectangular_roundtrip() {
        let m = CoeffMatrix::from_fn(8, 32, |r, c| ((r * 53 + c * 29) % 256) as f64);
        for levels in 1..=3 {
            let t = forward2d_pyramid(&m, levels).unwrap();
            assert_eq!(inverse2d_pyramid(&t, levels).unwrap(), m);
        }
    }
}
